#include "sct/supervisor.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "sct/codec.hpp"
#include "sct/error.hpp"

namespace sct {

const char* phase_literal(Phase p) {
  switch (p) {
    case Phase::inactive: return "0";
    case Phase::active: return "a";
    case Phase::mitigated: return "m";
  }
  return "?";
}

Phase phase_from_literal(const std::string& s) {
  if (s == "0") return Phase::inactive;
  if (s == "a") return Phase::active;
  if (s == "m") return Phase::mitigated;
  throw SortMismatch("'" + s + "' is not a phase (expected 0, a or m)");
}

bool lifecycle_allows(Phase from, Phase to) {
  if (from == to) return true;
  return (from == Phase::inactive && to == Phase::active) ||
         (from == Phase::active && to == Phase::mitigated) ||
         (from == Phase::mitigated && to == Phase::inactive);
}

std::string risk_state_name(const std::vector<std::string>& factors,
                            const RiskState& r) {
  std::string out;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k) out += '_';
    out += factors[k];
    out += phase_literal(r.phases[k]);
  }
  return out.empty() ? "r" : out;
}

ControllerBehavior load_behavior(const std::filesystem::path& path) {
  return behavior_from_json(read_document(path));
}

std::string derive_action_name(const std::vector<std::string>& factors,
                               const RiskState& from, const RiskState& to) {
  if (from.phases.size() != factors.size() || to.phases.size() != factors.size())
    throw FormatError("risk state does not match the factor set");
  std::string name;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (from.phases[k] == to.phases[k]) continue;
    if (!lifecycle_allows(from.phases[k], to.phases[k]))
      throw LifecycleViolation("factor " + factors[k] + " cannot step from " +
                               phase_literal(from.phases[k]) + " to " +
                               phase_literal(to.phases[k]));
    if (!name.empty()) name += '_';
    name += factors[k] + phase_literal(to.phases[k]);
  }
  return name.empty() ? "nop" : name;
}

const ProgramState* GuardedActionProgram::state(const std::string& id) const {
  for (const auto& s : states)
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<RiskState> reachable_risk_states(const ControllerBehavior& b,
                                             std::vector<std::string>* warnings) {
  std::vector<RiskState> order{b.initial};
  std::set<RiskState> seen{b.initial};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const RiskState cur = order[k];
    for (const auto& t : b.transitions)
      if (t.source == cur && seen.insert(t.target).second) order.push_back(t.target);
  }
  if (warnings) {
    std::set<RiskState> mentioned;
    for (const auto& t : b.transitions) {
      mentioned.insert(t.source);
      mentioned.insert(t.target);
    }
    for (const auto& r : mentioned)
      if (!seen.contains(r))
        warnings->push_back("unreachable risk state " + risk_state_name(b.factors, r) +
                            " dropped");
  }
  return order;
}

namespace {

// First input valuation enabling two guards, if any.
std::optional<Valuation> overlap(const Guard& a, const Guard& b, const DeclSet& decls,
                                 std::uint64_t bound) {
  return satisfiable(make_and(a, b), decls, bound);
}

}  // namespace

GuardedActionProgram to_guarded_actions(const ControllerBehavior& b,
                                        IncompletePolicy policy,
                                        std::uint64_t bound) {
  GuardedActionProgram p;
  p.inputs = b.inputs;
  p.outputs = b.outputs;
  p.factors = b.factors;
  p.policy = policy;
  p.warnings = b.warnings;
  const auto reach = reachable_risk_states(b, &p.warnings);
  const std::set<RiskState> live(reach.begin(), reach.end());
  for (const auto& r : reach) p.states.push_back({risk_state_name(b.factors, r), r});
  p.initial = risk_state_name(b.factors, b.initial);

  for (const auto& t : b.transitions) {
    if (!live.contains(t.source)) continue;
    p.actions.push_back({derive_action_name(b.factors, t.source, t.target), t.guard,
                         risk_state_name(b.factors, t.source), t.output,
                         risk_state_name(b.factors, t.target)});
  }
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    for (std::size_t j = i + 1; j < p.actions.size(); ++j) {
      const auto& a = p.actions[i];
      const auto& c = p.actions[j];
      if (a.source != c.source) continue;
      if (auto w = overlap(a.guard, c.guard, p.inputs, bound))
        throw DeterminismViolation("risk state " + a.source + ": guards " +
                                       print_guard(a.guard) + " and " +
                                       print_guard(c.guard) + " overlap",
                                   canonical_text(*w));
    }
  }
  return p;
}

namespace {

// Resolution over candidate actions of `state`, in program order.
template <class Range>
StepResult resolve(const GuardedActionProgram& p, const Range& candidates,
                   const Valuation& input, const std::string& state) {
  const GuardedAction* hit = nullptr;
  for (const GuardedAction* a : candidates) {
    if (a->source != state || !eval_guard(a->guard, input)) continue;
    if (!hit) {
      hit = a;
      if (p.resolution == Resolution::first_match) break;
      continue;
    }
    throw DeterminismViolation("actions '" + hit->name + "' and '" + a->name +
                                   "' are both enabled in " + state,
                               canonical_text(input));
  }
  if (hit) return {hit->output, hit->target};
  if (p.policy == IncompletePolicy::complete_with_selfloop) return {Valuation{}, state};
  throw IncompletenessError("no enabled action in " + state + " for " +
                            canonical_text(input));
}

}  // namespace

StepResult interpret_step(const GuardedActionProgram& p, const Valuation& input,
                          const std::string& state) {
  std::vector<const GuardedAction*> all;
  all.reserve(p.actions.size());
  for (const auto& a : p.actions) all.push_back(&a);
  return resolve(p, all, input, state);
}

Interpreter::Interpreter(const GuardedActionProgram& p) : program_(&p), state_(p.initial) {
  for (const auto& a : p.actions) by_source_[a.source].push_back(&a);
}

Valuation Interpreter::step(const Valuation& input) {
  static const std::vector<const GuardedAction*> none;
  auto it = by_source_.find(state_);
  auto r = resolve(*program_, it == by_source_.end() ? none : it->second, input, state_);
  state_ = std::move(r.target);
  return std::move(r.output);
}

Sfsm program_as_sfsm(const GuardedActionProgram& p) {
  Sfsm r;
  r.input_vars = p.inputs;
  r.output_vars = p.outputs;
  for (const auto& s : p.states) r.states.push_back(s.id);
  r.initial = p.initial;
  for (const auto& a : p.actions)
    r.transitions.push_back({a.source, a.name, a.guard, a.output, a.target});
  return r;
}

Sfsm to_test_reference(const ControllerBehavior& b, std::uint64_t bound) {
  return program_as_sfsm(to_guarded_actions(b, IncompletePolicy::error, bound));
}

ProgramCheck check_program(const GuardedActionProgram& p, std::uint64_t bound) {
  ProgramCheck c;
  try {
    check_decls(p.inputs);
    check_decls(p.outputs);
  } catch (const Error& e) {
    c.problems.push_back(e.what());
    return c;
  }
  if (!p.state(p.initial)) c.problems.push_back("initial state " + p.initial + " undeclared");
  for (const auto& a : p.actions) {
    if (!p.state(a.source)) c.problems.push_back("action " + a.name + ": undeclared source " + a.source);
    if (!p.state(a.target)) c.problems.push_back("action " + a.name + ": undeclared target " + a.target);
    for (const auto* cmp : comparisons(a.guard))
      if (!find_decl(p.inputs, cmp->var))
        c.problems.push_back("action " + a.name + ": guard reads undeclared " + cmp->var);
    try {
      check_valuation(a.output, p.outputs);
    } catch (const Error& e) {
      c.problems.push_back("action " + a.name + ": " + e.what());
    }
  }
  if (!c.ok()) return c;
  for (const auto& s : p.states) {
    bool reported_gap = false;
    for_each_valuation(p.inputs, [&](const Valuation& v) {
      try {
        interpret_step(p, v, s.id);
      } catch (const IncompletenessError& e) {
        if (!reported_gap) c.problems.push_back(e.what());
        reported_gap = true;
      } catch (const DeterminismViolation& e) {
        c.problems.push_back(e.what());
        return false;
      }
      return true;
    }, bound);
  }
  return c;
}

MealyMachine program_as_machine(const GuardedActionProgram& p, std::uint64_t bound) {
  const auto inputs = enumerate_valuations(p.inputs, bound);
  MachineDescription d;
  for (const auto& v : inputs) d.inputs.push_back(canonical_text(v));
  d.initial = p.initial;
  std::set<std::string> outputs;
  std::vector<std::string> order{p.initial};
  std::set<std::string> seen{p.initial};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::string s = order[k];
    for (std::size_t x = 0; x < inputs.size(); ++x) {
      auto r = interpret_step(p, inputs[x], s);
      auto out = canonical_text(r.output);
      outputs.insert(out);
      d.transitions.push_back({s, d.inputs[x], r.target, out});
      if (seen.insert(r.target).second) order.push_back(r.target);
    }
  }
  d.states = order;
  d.outputs.assign(outputs.begin(), outputs.end());
  return MealyMachine::from_description(d);
}

HypothesisReport check_hypotheses(const GuardedActionProgram& p, const Sfsm& r) {
  HypothesisReport rep;
  rep.reference_states = r.states.size();
  rep.program_states = p.states.size();
  if (rep.reference_states != rep.program_states)
    rep.diffs.push_back("state count: reference has " + std::to_string(rep.reference_states) +
                        ", program has " + std::to_string(rep.program_states));

  std::map<std::string, std::multiset<std::string>> ref_guards, prog_guards;
  for (const auto& s : r.states) ref_guards[s];
  for (const auto& s : p.states) prog_guards[s.id];
  for (const auto& t : r.transitions) ref_guards[t.from].insert(print_guard(t.guard));
  for (const auto& a : p.actions) prog_guards[a.source].insert(print_guard(a.guard));

  std::set<std::string> all;
  for (const auto& [s, g] : ref_guards) all.insert(s);
  for (const auto& [s, g] : prog_guards) all.insert(s);
  for (const auto& s : all) {
    const auto& a = ref_guards[s];
    const auto& b = prog_guards[s];
    if (a == b) continue;
    std::vector<std::string> only_ref, only_prog;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_ref));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_prog));
    std::string msg = "guards of " + s + ":";
    for (const auto& g : only_ref) msg += " -" + g;
    for (const auto& g : only_prog) msg += " +" + g;
    rep.diffs.push_back(msg);
  }
  return rep;
}

}  // namespace sct
