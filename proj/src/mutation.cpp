#include "sct/mutation.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "sct/codec.hpp"
#include "sct/error.hpp"

namespace sct {

const char* to_string(MutationOperator op) {
  switch (op) {
    case MutationOperator::output_fault: return "output-fault";
    case MutationOperator::transfer_fault: return "transfer-fault";
    case MutationOperator::extra_state: return "extra-state";
    case MutationOperator::guard_flip: return "guard-literal-flip";
  }
  return "?";
}

MutationOperator operator_from_string(const std::string& s) {
  if (s == "output-fault" || s == "output") return MutationOperator::output_fault;
  if (s == "transfer-fault" || s == "transfer") return MutationOperator::transfer_fault;
  if (s == "extra-state" || s == "extra") return MutationOperator::extra_state;
  if (s == "guard-literal-flip" || s == "guard-flip" || s == "flip")
    return MutationOperator::guard_flip;
  throw FormatError("unknown mutation operator '" + s + "'");
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::equivalent: return "EQUIVALENT";
    case OutcomeKind::killed: return "KILLED";
    case OutcomeKind::escaped: return "ESCAPED";
    case OutcomeKind::error: return "ERROR";
  }
  return "?";
}

ClassifyMode classify_mode_from_string(const std::string& s) {
  if (s == "oracle") return ClassifyMode::oracle;
  if (s == "harness") return ClassifyMode::harness;
  if (s == "both") return ClassifyMode::both;
  throw FormatError("unknown classification mode '" + s + "'");
}

namespace {

std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
  std::string name = base + "'";
  while (std::find(taken.begin(), taken.end(), name) != taken.end()) name += "'";
  return name;
}

// Indices of `count` candidates out of `total`: all of them in order when
// few enough, otherwise a seeded partial Fisher-Yates shuffle consumed
// until `accept` has taken `limit` of them. The result is sorted.
template <class Accept>
std::vector<std::size_t> select(std::size_t total, const MutationOptions& opt, Accept accept) {
  std::vector<std::size_t> chosen;
  if (opt.limit == 0) return chosen;
  if (total <= opt.limit) {
    for (std::size_t k = 0; k < total; ++k)
      if (accept(k)) chosen.push_back(k);
    return chosen;
  }
  std::vector<std::size_t> perm(total);
  for (std::size_t k = 0; k < total; ++k) perm[k] = k;
  std::mt19937_64 rng(opt.seed);
  for (std::size_t i = 0; i < total && chosen.size() < opt.limit; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (total - i));
    std::swap(perm[i], perm[j]);
    if (accept(perm[i])) chosen.push_back(perm[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// ---------------------------------------------------------------------------
// Machine mutants

struct MachineCandidate {
  MutationOperator op;
  int state, input;  // mutated transition (of the clone for extra-state)
  int alt;           // replacement output, or replacement target
  bool change_output;
  int cloned = -1, via_state = -1, via_input = -1;
};

std::vector<MachineCandidate> machine_candidates(const MealyMachine& m,
                                                 const MutationOptions& opt) {
  std::vector<MachineCandidate> out;
  const int n = m.state_count();
  for (auto op : opt.operators) {
    if (op == MutationOperator::output_fault || op == MutationOperator::transfer_fault) {
      const bool o = op == MutationOperator::output_fault;
      for (int s = 0; s < n; ++s)
        for (int x = 0; x < m.input_count(); ++x) {
          const auto& e = m.edge(s, x);
          if (!e) continue;
          const int range = o ? m.output_count() : n;
          for (int alt = 0; alt < range; ++alt)
            if (alt != (o ? e->output : e->target)) out.push_back({op, s, x, alt, o});
        }
    } else if (op == MutationOperator::extra_state) {
      for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
          for (int x = 0; x < m.input_count(); ++x) {
            const auto& inbound = m.edge(p, x);
            if (!inbound || inbound->target != q) continue;
            for (int y = 0; y < m.input_count(); ++y) {
              const auto& e = m.edge(q, y);
              if (!e) continue;
              for (int alt = 0; alt < m.output_count(); ++alt)
                if (alt != e->output) out.push_back({op, n, y, alt, true, q, p, x});
              for (int alt = 0; alt <= n; ++alt)
                if (alt != e->target) out.push_back({op, n, y, alt, false, q, p, x});
            }
          }
    }
  }
  return out;
}

MachineDescription clone_description(const MealyMachine& m, int q, int from, int input,
                                     std::string* clone) {
  auto d = m.describe();
  const std::string& qn = m.states()[q];
  *clone = fresh_name(qn, d.states);
  d.states.push_back(*clone);
  std::vector<TransitionRow> copies;
  for (auto& row : d.transitions) {
    if (row.from == qn) copies.push_back({*clone, row.input, row.to, row.output});
  }
  for (auto& row : d.transitions)
    if (row.from == m.states()[from] && row.input == m.inputs()[input]) row.to = *clone;
  d.transitions.insert(d.transitions.end(), copies.begin(), copies.end());
  return d;
}

MachineMutant materialize(const MealyMachine& m, const MachineCandidate& c, std::size_t index) {
  MachineMutant mu{"m" + std::to_string(index), c.op, "", m};
  const auto& in = m.inputs();
  const auto& outs = m.outputs();
  MachineDescription d;
  std::string from_name;
  std::ostringstream locus;
  if (c.op == MutationOperator::extra_state) {
    d = clone_description(m, c.cloned, c.via_state, c.via_input, &from_name);
    locus << "clone " << m.states()[c.cloned] << " as " << from_name << " via "
          << m.states()[c.via_state] << "/" << in[c.via_input] << "; ";
  } else {
    d = m.describe();
    from_name = m.states()[c.state];
  }
  for (auto& row : d.transitions) {
    if (row.from != from_name || row.input != in[c.input]) continue;
    if (c.change_output) {
      locus << from_name << "/" << in[c.input] << " output " << row.output << " -> "
            << outs[c.alt];
      row.output = outs[c.alt];
    } else {
      const std::string& target = c.alt < m.state_count() ? m.states()[c.alt] : from_name;
      locus << from_name << "/" << in[c.input] << " target " << row.to << " -> " << target;
      row.to = target;
    }
    break;
  }
  mu.locus = locus.str();
  mu.machine = MealyMachine::from_description(d);
  return mu;
}

// ---------------------------------------------------------------------------
// Program mutants

struct ProgramCandidate {
  MutationOperator op;
  std::size_t action;  // index into actions (of the clone's copies for extra-state)
  std::size_t alt;     // output index, state index, or comparison index
  bool change_output = false;
  std::size_t cloned = 0, via_action = 0;
};

std::vector<Valuation> distinct_outputs(const GuardedActionProgram& p) {
  std::map<std::string, Valuation> by_text;
  for (const auto& a : p.actions) by_text.emplace(canonical_text(a.output), a.output);
  std::vector<Valuation> out;
  for (auto& [t, v] : by_text) out.push_back(v);
  return out;
}

std::vector<ProgramCandidate> program_candidates(const GuardedActionProgram& p,
                                                 const std::vector<Valuation>& outputs,
                                                 const MutationOptions& opt) {
  std::vector<ProgramCandidate> out;
  const std::size_t n = p.states.size();
  auto state_index = [&](const std::string& id) {
    for (std::size_t k = 0; k < n; ++k)
      if (p.states[k].id == id) return k;
    return n;
  };
  for (auto op : opt.operators) {
    for (std::size_t k = 0; k < p.actions.size() && op != MutationOperator::extra_state; ++k) {
      const auto& a = p.actions[k];
      if (op == MutationOperator::output_fault) {
        for (std::size_t o = 0; o < outputs.size(); ++o)
          if (outputs[o] != a.output) out.push_back({op, k, o, true});
      } else if (op == MutationOperator::transfer_fault) {
        for (std::size_t s = 0; s < n; ++s)
          if (p.states[s].id != a.target) out.push_back({op, k, s, false});
      } else if (op == MutationOperator::guard_flip) {
        const auto count = comparisons(a.guard).size();
        for (std::size_t c = 0; c < count; ++c) out.push_back({op, k, c, false});
      }
    }
    if (op != MutationOperator::extra_state) continue;
    for (std::size_t q = 0; q < n; ++q) {
      const auto& qid = p.states[q].id;
      for (std::size_t via = 0; via < p.actions.size(); ++via) {
        if (p.actions[via].target != qid) continue;
        for (std::size_t k = 0; k < p.actions.size(); ++k) {
          const auto& a = p.actions[k];
          if (a.source != qid) continue;
          for (std::size_t o = 0; o < outputs.size(); ++o)
            if (outputs[o] != a.output) out.push_back({op, k, o, true, q, via});
          const std::size_t current = state_index(a.target);
          for (std::size_t s = 0; s <= n; ++s)
            if (s != current) out.push_back({op, k, s, false, q, via});
        }
      }
    }
  }
  return out;
}

ProgramMutant materialize(const GuardedActionProgram& p, const std::vector<Valuation>& outputs,
                          const ProgramCandidate& c, std::size_t index) {
  ProgramMutant mu{"m" + std::to_string(index), c.op, "", p};
  auto& q = mu.program;
  q.warnings.clear();
  std::ostringstream locus;
  std::size_t target_action = c.action;
  std::string clone;
  if (c.op == MutationOperator::extra_state) {
    const auto& orig = p.states[c.cloned];
    std::vector<std::string> ids;
    for (const auto& s : p.states) ids.push_back(s.id);
    clone = fresh_name(orig.id, ids);
    q.states.push_back({clone, orig.risk});
    q.actions[c.via_action].target = clone;
    locus << "clone " << orig.id << " as " << clone << " via action " << c.via_action << " ("
          << p.actions[c.via_action].name << "); ";
    for (std::size_t k = 0; k < p.actions.size(); ++k) {
      if (p.actions[k].source != orig.id) continue;
      auto copy = p.actions[k];
      copy.source = clone;
      if (k == c.action) target_action = q.actions.size();
      q.actions.push_back(std::move(copy));
    }
  }
  auto& a = q.actions[target_action];
  locus << "action " << target_action << " (" << a.name << " in " << a.source << ") ";
  switch (c.op) {
    case MutationOperator::guard_flip:
      locus << "flip comparison " << c.alt << " of " << print_guard(a.guard);
      a.guard = flip_comparison(a.guard, c.alt);
      q.resolution = Resolution::first_match;
      break;
    default:
      if (c.change_output) {
        locus << "output " << canonical_text(a.output) << " -> " << canonical_text(outputs[c.alt]);
        a.output = outputs[c.alt];
      } else {
        const std::string& t = c.alt < p.states.size() ? p.states[c.alt].id : clone;
        locus << "target " << a.target << " -> " << t;
        a.target = t;
      }
  }
  mu.locus = locus.str();
  return mu;
}

// ---------------------------------------------------------------------------
// Classification

std::optional<std::size_t> first_failing_case(const MealyMachine& m, const TestSuite& suite) {
  for (std::size_t c = 0; c < suite.cases.size(); ++c) {
    const auto& tc = suite.cases[c];
    int s = m.initial();
    for (std::size_t k = 0; k < tc.inputs.size(); ++k) {
      auto x = m.input_index(tc.inputs[k]);
      const auto* e = x ? &m.edge(s, *x) : nullptr;
      if (!e || !*e || m.outputs()[(*e)->output] != tc.expected[k]) return c;
      s = (*e)->target;
    }
  }
  return std::nullopt;
}

Classification judge(bool equivalent, const TestReport& r) {
  Classification c;
  if (r.errors) {
    c.kind = OutcomeKind::error;
    for (const auto& v : r.verdicts)
      if (v.kind == VerdictKind::error) {
        c.message = "case " + std::to_string(v.case_index) + ": " + v.message;
        break;
      }
    return c;
  }
  c.first_failing_case = r.first_failure();
  c.kind = equivalent ? OutcomeKind::equivalent
                      : (c.first_failing_case ? OutcomeKind::killed : OutcomeKind::escaped);
  return c;
}

Classification judge(bool equivalent, std::optional<std::size_t> failing) {
  Classification c;
  c.first_failing_case = failing;
  c.kind = equivalent ? OutcomeKind::equivalent
                      : (failing ? OutcomeKind::killed : OutcomeKind::escaped);
  return c;
}

Classification harness_error(const std::string& what) {
  return {OutcomeKind::error, std::nullopt, what};
}

MutationOutcome classify_machine(const MealyMachine& reference, const TestSuite& suite,
                                 const ConcreteSuite* wire_suite, const MachineMutant& mu,
                                 const ClassifyOptions& opt, const MachineSutFactory& factory) {
  MutationOutcome out{mu.id, mu.op, mu.locus, mu.machine.state_count(), {}, {}};
  const bool eq = equivalent(reference, mu.machine).equivalent;
  if (opt.mode != ClassifyMode::harness) out.oracle = judge(eq, first_failing_case(mu.machine, suite));
  if (opt.mode != ClassifyMode::oracle) {
    try {
      auto sut = factory ? factory(mu) : std::make_unique<MachineSut>(mu.machine);
      out.harness = judge(eq, run_suite(*sut, *wire_suite, ""));
    } catch (const Error& e) {
      out.harness = harness_error(e.what());
    }
  }
  return out;
}

MutationOutcome classify_program(const MealyMachine& reference_machine,
                                 const ConcreteSuite& suite, const ProgramMutant& mu,
                                 const ClassifyOptions& opt, const ProgramSutFactory& factory) {
  MutationOutcome out{mu.id, mu.op, mu.locus, static_cast<int>(mu.program.states.size()), {}, {}};
  bool eq = false;
  try {
    eq = equivalent(reference_machine, program_as_machine(mu.program, opt.bound)).equivalent;
  } catch (const Error& e) {
    // Not well formed; nothing can be certified.
    Classification c = harness_error(std::string("oracle: ") + e.what());
    if (opt.mode != ClassifyMode::harness) out.oracle = c;
    if (opt.mode != ClassifyMode::oracle) out.harness = c;
    return out;
  }
  if (opt.mode != ClassifyMode::harness) {
    ProgramSut sut(mu.program);
    out.oracle = judge(eq, run_suite(sut, suite, ""));
  }
  if (opt.mode != ClassifyMode::oracle) {
    try {
      auto sut = factory ? factory(mu) : std::make_unique<ProgramSut>(mu.program);
      out.harness = judge(eq, run_suite(*sut, suite, ""));
    } catch (const Error& e) {
      out.harness = harness_error(e.what());
    }
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) fn(k);
    });
  for (auto& t : workers) t.join();
}

}  // namespace

MealyMachine clone_state(const MealyMachine& m, int q, int from, int input) {
  std::string clone;
  return MealyMachine::from_description(clone_description(m, q, from, input, &clone));
}

std::size_t candidate_count(const MealyMachine& m, const MutationOptions& opt) {
  return machine_candidates(m, opt).size();
}

std::vector<MachineMutant> generate_mutants(const MealyMachine& m, const MutationOptions& opt) {
  const auto cands = machine_candidates(m, opt);
  std::vector<MachineMutant> out;
  for (auto k : select(cands.size(), opt, [](std::size_t) { return true; }))
    out.push_back(materialize(m, cands[k], k));
  return out;
}

std::vector<ProgramMutant> generate_mutants(const GuardedActionProgram& p,
                                            const MutationOptions& opt, std::uint64_t bound) {
  const auto outputs = distinct_outputs(p);
  const auto cands = program_candidates(p, outputs, opt);
  std::map<std::size_t, ProgramMutant> built;
  auto accept = [&](std::size_t k) {
    auto mu = materialize(p, outputs, cands[k], k);
    if (!check_program(mu.program, bound).ok()) return false;
    built.emplace(k, std::move(mu));
    return true;
  };
  std::vector<ProgramMutant> out;
  for (auto k : select(cands.size(), opt, accept)) out.push_back(std::move(built.at(k)));
  return out;
}

MutationOutcome classify(const MealyMachine& reference, const TestSuite& suite,
                         const MachineMutant& mutant, const ClassifyOptions& opt,
                         const MachineSutFactory& factory) {
  const auto wire = symbolic_suite(suite);
  return classify_machine(reference, suite, &wire, mutant, opt, factory);
}

MutationOutcome classify(const GuardedActionProgram& reference, const ConcreteSuite& suite,
                         const ProgramMutant& mutant, const ClassifyOptions& opt,
                         const ProgramSutFactory& factory) {
  return classify_program(program_as_machine(reference, opt.bound), suite, mutant, opt, factory);
}

std::vector<MutationOutcome> classify_all(const MealyMachine& reference, const TestSuite& suite,
                                          const std::vector<MachineMutant>& mutants,
                                          const ClassifyOptions& opt,
                                          const MachineSutFactory& factory) {
  const auto wire = symbolic_suite(suite);
  std::vector<MutationOutcome> out(mutants.size());
  parallel_for(mutants.size(), opt.jobs, [&](std::size_t k) {
    out[k] = classify_machine(reference, suite, &wire, mutants[k], opt, factory);
  });
  return out;
}

std::vector<MutationOutcome> classify_all(const GuardedActionProgram& reference,
                                          const ConcreteSuite& suite,
                                          const std::vector<ProgramMutant>& mutants,
                                          const ClassifyOptions& opt,
                                          const ProgramSutFactory& factory) {
  const auto ref = program_as_machine(reference, opt.bound);
  std::vector<MutationOutcome> out(mutants.size());
  parallel_for(mutants.size(), opt.jobs, [&](std::size_t k) {
    out[k] = classify_program(ref, suite, mutants[k], opt, factory);
  });
  return out;
}

MutationSummary mutation_report(const std::vector<MutationOutcome>& outcomes) {
  MutationSummary s;
  s.total = outcomes.size();
  for (const auto& o : outcomes) {
    const auto& r = o.result();
    switch (r.kind) {
      case OutcomeKind::killed: ++s.killed; break;
      case OutcomeKind::equivalent:
        ++s.equivalent;
        if (r.first_failing_case) ++s.false_failures;
        break;
      case OutcomeKind::escaped: ++s.escaped; break;
      case OutcomeKind::error: ++s.errors; break;
    }
    if (!o.modes_agree()) ++s.disagreements;
  }
  if (s.killed + s.escaped > 0)
    s.score = static_cast<double>(s.killed) / static_cast<double>(s.killed + s.escaped);
  return s;
}

namespace {

Json classification_json(const Classification& c) {
  Json j{{"outcome", to_string(c.kind)}};
  if (c.first_failing_case) j["firstFailingCase"] = *c.first_failing_case;
  if (!c.message.empty()) j["message"] = c.message;
  return j;
}

}  // namespace

Json mutation_report_to_json(const std::vector<MutationOutcome>& outcomes) {
  const auto s = mutation_report(outcomes);
  Json rows = Json::array();
  for (const auto& o : outcomes) {
    Json j{{"id", o.id}, {"operator", to_string(o.op)}, {"locus", o.locus}, {"states", o.states}};
    if (o.oracle) j["oracle"] = classification_json(*o.oracle);
    if (o.harness) j["harness"] = classification_json(*o.harness);
    if (o.oracle && o.harness) j["agree"] = o.modes_agree();
    rows.push_back(std::move(j));
  }
  Json summary{{"total", s.total},
               {"killed", s.killed},
               {"equivalent", s.equivalent},
               {"escaped", s.escaped},
               {"errors", s.errors},
               {"falseFailures", s.false_failures},
               {"disagreements", s.disagreements}};
  summary["score"] = s.score ? Json(*s.score) : Json("n/a");
  return Json{{"kind", "mutation-report"}, {"mutants", std::move(rows)}, {"summary", summary}};
}

std::string mutation_report_csv(const std::vector<MutationOutcome>& outcomes) {
  auto field = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  auto cls = [](const std::optional<Classification>& c) {
    if (!c) return std::string(",");
    return std::string(to_string(c->kind)) + "," +
           (c->first_failing_case ? std::to_string(*c->first_failing_case) : "");
  };
  std::ostringstream os;
  os << "id,operator,locus,states,oracle_outcome,oracle_first_failing_case,harness_outcome,"
        "harness_first_failing_case\n";
  for (const auto& o : outcomes)
    os << o.id << "," << to_string(o.op) << "," << field(o.locus) << "," << o.states << ","
       << cls(o.oracle) << "," << cls(o.harness) << "\n";
  return os.str();
}

std::string mutation_summary_text(const MutationSummary& s) {
  std::ostringstream os;
  os << "mutants  killed  equivalent  escaped  errors  score\n"
     << std::left << std::setw(9) << s.total << std::setw(8) << s.killed << std::setw(12)
     << s.equivalent << std::setw(9) << s.escaped << std::setw(8) << s.errors;
  if (s.score)
    os << std::fixed << std::setprecision(4) << *s.score;
  else
    os << "n/a";
  os << "\n";
  if (s.false_failures) os << "false failures on equivalent mutants: " << s.false_failures << "\n";
  if (s.disagreements) os << "oracle/harness disagreements: " << s.disagreements << "\n";
  return os.str();
}

}  // namespace sct
