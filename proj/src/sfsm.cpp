#include "sct/sfsm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sct/error.hpp"
#include "sct/hash.hpp"

namespace sct {

const char* to_string(IncompletePolicy p) {
  return p == IncompletePolicy::error ? "error" : "complete-with-selfloop";
}

IncompletePolicy policy_from_string(const std::string& s) {
  if (s == "error") return IncompletePolicy::error;
  if (s == "complete-with-selfloop") return IncompletePolicy::complete_with_selfloop;
  throw FormatError("unknown incompleteness policy '" + s + "'");
}

void check_structure(const Sfsm& r) {
  check_decls(r.input_vars);
  check_decls(r.output_vars);
  std::set<std::string> states(r.states.begin(), r.states.end());
  if (states.size() != r.states.size()) throw FormatError("duplicate SFSM state");
  if (!states.contains(r.initial))
    throw FormatError("initial state '" + r.initial + "' is not declared");
  for (const auto& t : r.transitions) {
    if (!states.contains(t.from)) throw FormatError("undeclared state '" + t.from + "'");
    if (!states.contains(t.to)) throw FormatError("undeclared state '" + t.to + "'");
    for (const auto* c : comparisons(t.guard))
      if (!find_decl(r.input_vars, c->var)) throw UndeclaredVariable(c->var);
    check_valuation(t.output, r.output_vars);
  }
}

namespace {

// Outgoing transition indices per state, in transition-list order.
std::map<std::string, std::vector<std::size_t>> outgoing(const Sfsm& r) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < r.transitions.size(); ++k)
    out[r.transitions[k].from].push_back(k);
  return out;
}

}  // namespace

SfsmCheck check_sfsm(const Sfsm& r, std::uint64_t bound) {
  SfsmCheck result;
  const auto out = outgoing(r);
  for (const auto& s : r.states) {
    auto it = out.find(s);
    static const std::vector<std::size_t> none;
    const auto& ts = it == out.end() ? none : it->second;
    std::set<std::pair<std::size_t, std::size_t>> reported;
    bool gap_reported = false;
    for_each_valuation(r.input_vars, [&](const Valuation& v) {
      std::vector<std::size_t> enabled;
      for (auto k : ts)
        if (eval_guard(r.transitions[k].guard, v)) enabled.push_back(k);
      if (enabled.empty() && !gap_reported) {
        result.gaps.emplace_back(s, canonical_text(v));
        gap_reported = true;
      }
      for (std::size_t i = 0; i < enabled.size(); ++i)
        for (std::size_t j = i + 1; j < enabled.size(); ++j)
          if (reported.insert({enabled[i], enabled[j]}).second)
            result.overlaps.push_back(
                "state " + s + ": '" + r.transitions[enabled[i]].action + "' and '" +
                r.transitions[enabled[j]].action + "' overlap at " + canonical_text(v));
      return true;
    }, bound);
  }
  return result;
}

const InputClass* InputClassPartition::find(const std::string& id) const {
  for (const auto& c : classes)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<Guard> distinct_guards(const Sfsm& r) {
  std::vector<Guard> out;
  std::set<std::string> seen;
  for (const auto& t : r.transitions)
    if (seen.insert(print_guard(t.guard)).second) out.push_back(t.guard);
  return out;
}

std::vector<bool> signature_of(const std::vector<Guard>& guards,
                               const Valuation& v) {
  std::vector<bool> sig;
  sig.reserve(guards.size());
  for (const auto& g : guards) sig.push_back(eval_guard(g, v));
  return sig;
}

InputClassPartition input_classes(const Sfsm& r, std::uint64_t bound) {
  InputClassPartition p;
  const auto guards = distinct_guards(r);
  for (const auto& g : guards) p.guards.push_back(print_guard(g));
  std::map<std::vector<bool>, std::size_t> index;
  for_each_valuation(r.input_vars, [&](const Valuation& v) {
    auto sig = signature_of(guards, v);
    auto [it, fresh] = index.try_emplace(sig, p.classes.size());
    if (fresh)
      p.classes.push_back({"c" + std::to_string(p.classes.size()), std::move(sig), v, 0});
    ++p.classes[it->second].size;
    return true;
  }, bound);
  return p;
}

std::optional<std::string> AbstractionMap::label_of(const Valuation& out) const {
  for (const auto& [label, v] : output_valuation)
    if (v == out) return label;
  return std::nullopt;
}

std::optional<SfsmStep> sfsm_step(const Sfsm& r, const std::string& state,
                                  const Valuation& input) {
  const SfsmTransition* hit = nullptr;
  for (const auto& t : r.transitions) {
    if (t.from != state || !eval_guard(t.guard, input)) continue;
    if (hit)
      throw DeterminismViolation("state " + state + ": '" + hit->action + "' and '" +
                                     t.action + "' are both enabled",
                                 canonical_text(input));
    hit = &t;
  }
  if (!hit) return std::nullopt;
  return SfsmStep{hit->to, hit->output};
}

Abstraction abstract_to_fsm(const Sfsm& r, IncompletePolicy policy,
                            std::uint64_t bound) {
  check_structure(r);
  auto partition = input_classes(r, bound);

  // Output labels in canonical order of the distinct valuations.
  std::map<std::string, Valuation> by_text;
  for (const auto& t : r.transitions) by_text.emplace(canonical_text(t.output), t.output);
  AbstractionMap map;
  std::map<std::string, std::string> label_of_text;
  MachineDescription d;
  d.states = r.states;
  d.initial = r.initial;
  for (const auto& c : partition.classes) {
    d.inputs.push_back(c.id);
    map.class_representative[c.id] = c.representative;
  }
  for (const auto& [text, v] : by_text) {
    std::string label = "o" + std::to_string(d.outputs.size());
    label_of_text[text] = label;
    map.output_valuation[label] = v;
    d.outputs.push_back(label);
  }

  const auto out = outgoing(r);
  bool nil_used = false;
  // Overlaps take precedence, so a gap is only reported after the scan.
  std::optional<std::string> gap;
  for (const auto& s : r.states) {
    auto it = out.find(s);
    for (const auto& c : partition.classes) {
      const SfsmTransition* hit = nullptr;
      if (it != out.end()) {
        for (auto k : it->second) {
          const auto& t = r.transitions[k];
          if (!eval_guard(t.guard, c.representative)) continue;
          if (hit)
            throw DeterminismViolation("state " + s + ": '" + hit->action + "' and '" +
                                           t.action + "' overlap",
                                       canonical_text(c.representative));
          hit = &t;
        }
      }
      if (hit) {
        d.transitions.push_back({s, c.id, hit->to, label_of_text[canonical_text(hit->output)]});
      } else if (policy == IncompletePolicy::complete_with_selfloop) {
        d.transitions.push_back({s, c.id, s, kNilLabel});
        nil_used = true;
      } else if (!gap) {
        gap = "state " + s + " enables no transition for class " + c.id + " " +
              canonical_text(c.representative);
      }
    }
  }
  if (gap) throw IncompletenessError(*gap);
  if (nil_used) {
    d.outputs.push_back(kNilLabel);
    map.output_valuation[kNilLabel] = Valuation{};
  }
  return {MealyMachine::from_description(d), std::move(map), std::move(partition)};
}

ConcreteSuite concretize_suite(const TestSuite& ts, const AbstractionMap& map) {
  ConcreteSuite out{ts.method, ts.m_bound, ts.reference_fingerprint, {}};
  out.cases.reserve(ts.cases.size());
  for (const auto& c : ts.cases) {
    ConcreteCase cc;
    for (const auto& x : c.inputs) {
      auto it = map.class_representative.find(x);
      if (it == map.class_representative.end())
        throw FormatError("unknown input class '" + x + "'");
      cc.inputs.push_back(it->second);
    }
    for (const auto& y : c.expected) {
      auto it = map.output_valuation.find(y);
      if (it == map.output_valuation.end())
        throw FormatError("unknown output label '" + y + "'");
      cc.expected.push_back(it->second);
    }
    out.cases.push_back(std::move(cc));
  }
  return out;
}

std::uint64_t hash_label(const Valuation& v) { return fnv1a64(canonical_text(v)); }

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const Sfsm& r, std::uint64_t bound) {
  std::ostringstream os;
  os << "digraph sfsm {\n  rankdir=LR;\n  node [shape=ellipse];\n"
     << "  __start [shape=point];\n  __start -> " << quoted(r.initial) << ";\n";
  for (const auto& s : r.states) os << "  " << quoted(s) << ";\n";
  for (const auto& t : r.transitions) {
    auto witness = satisfiable(t.guard, r.input_vars, bound).value_or(Valuation{});
    os << "  " << quoted(t.from) << " -> " << quoted(t.to) << " [label="
       << quoted(t.action + ":" + std::to_string(hash_label(witness)) + "/" +
                 std::to_string(hash_label(t.output)))
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sct
