#include "sct/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "sct/error.hpp"

namespace sct {

namespace {

std::optional<int> index_of(const std::vector<std::string>& v,
                            const std::string& name) {
  auto it = std::find(v.begin(), v.end(), name);
  if (it == v.end()) return std::nullopt;
  return static_cast<int>(it - v.begin());
}

std::string pair_text(const std::string& a, const std::string& b) {
  return "(" + a + ", " + b + ")";
}

}  // namespace

std::vector<std::string> ValidationReport::errors() const {
  std::vector<std::string> out;
  for (const auto& d : dangling) out.push_back("dangling reference: " + d);
  for (const auto& [s, x] : duplicates)
    out.push_back("nondeterministic pair " + pair_text(s, x));
  return out;
}

ValidationReport validate(const MachineDescription& d) {
  ValidationReport r;
  std::set<std::string> states(d.states.begin(), d.states.end());
  std::set<std::string> inputs(d.inputs.begin(), d.inputs.end());
  std::set<std::string> outputs(d.outputs.begin(), d.outputs.end());
  if (states.size() != d.states.size())
    r.dangling.push_back("duplicate state declaration");
  if (inputs.size() != d.inputs.size())
    r.dangling.push_back("duplicate input declaration");
  if (outputs.size() != d.outputs.size())
    r.dangling.push_back("duplicate output declaration");
  if (!states.contains(d.initial))
    r.dangling.push_back("initial state '" + d.initial + "'");

  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> used_inputs, used_outputs;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& t : d.transitions) {
    if (!states.contains(t.from)) r.dangling.push_back("state '" + t.from + "'");
    if (!states.contains(t.to)) r.dangling.push_back("state '" + t.to + "'");
    if (!inputs.contains(t.input))
      r.dangling.push_back("input '" + t.input + "'");
    if (!outputs.contains(t.output))
      r.dangling.push_back("output '" + t.output + "'");
    if (!seen.insert({t.from, t.input}).second) {
      r.deterministic = false;
      r.duplicates.emplace_back(t.from, t.input);
    }
    used_inputs.insert(t.input);
    used_outputs.insert(t.output);
    succ[t.from].push_back(t.to);
  }
  for (const auto& s : d.states)
    for (const auto& x : d.inputs)
      if (!seen.contains({s, x})) r.missing.emplace_back(s, x);
  r.complete = r.missing.empty();
  for (const auto& x : d.inputs)
    if (!used_inputs.contains(x)) r.unused.push_back("input '" + x + "'");
  for (const auto& o : d.outputs)
    if (!used_outputs.contains(o)) r.unused.push_back("output '" + o + "'");

  if (states.contains(d.initial)) {
    std::set<std::string> reached{d.initial};
    std::deque<std::string> work{d.initial};
    while (!work.empty()) {
      auto s = work.front();
      work.pop_front();
      for (const auto& n : succ[s])
        if (reached.insert(n).second) work.push_back(n);
    }
    for (const auto& s : d.states)
      if (!reached.contains(s)) r.unreachable.push_back(s);
  }
  return r;
}

MealyMachine MealyMachine::from_description(const MachineDescription& d) {
  auto report = validate(d);
  if (!report.usable()) throw FormatError(report.errors().front());
  MealyMachine m;
  m.states_ = d.states;
  m.inputs_ = d.inputs;
  m.outputs_ = d.outputs;
  m.initial_ = *index_of(d.states, d.initial);
  m.table_.assign(d.states.size() * d.inputs.size(), std::nullopt);
  std::map<std::string, int> si, ii, oi;
  for (int k = 0; k < m.state_count(); ++k) si[m.states_[k]] = k;
  for (int k = 0; k < m.input_count(); ++k) ii[m.inputs_[k]] = k;
  for (int k = 0; k < m.output_count(); ++k) oi[m.outputs_[k]] = k;
  for (const auto& t : d.transitions) {
    m.table_[static_cast<std::size_t>(si[t.from] * m.input_count() +
                                      ii[t.input])] =
        Edge{si[t.to], oi[t.output]};
  }
  return m;
}

MachineDescription MealyMachine::describe() const {
  MachineDescription d{states_, states_[initial_], inputs_, outputs_, {}};
  for (int s = 0; s < state_count(); ++s)
    for (int x = 0; x < input_count(); ++x)
      if (const auto& e = edge(s, x))
        d.transitions.push_back(
            {states_[s], inputs_[x], states_[e->target], outputs_[e->output]});
  return d;
}

bool MealyMachine::is_complete() const {
  return std::all_of(table_.begin(), table_.end(),
                     [](const auto& e) { return e.has_value(); });
}

std::optional<int> MealyMachine::state_index(const std::string& name) const {
  return index_of(states_, name);
}
std::optional<int> MealyMachine::input_index(const std::string& name) const {
  return index_of(inputs_, name);
}
std::optional<int> MealyMachine::output_index(const std::string& name) const {
  return index_of(outputs_, name);
}

std::vector<int> MealyMachine::encode_inputs(
    std::span<const std::string> word) const {
  std::vector<int> out;
  out.reserve(word.size());
  for (const auto& x : word) {
    auto k = input_index(x);
    if (!k) throw FormatError("unknown input symbol '" + x + "'");
    out.push_back(*k);
  }
  return out;
}

Word MealyMachine::decode_inputs(std::span<const int> word) const {
  Word out;
  out.reserve(word.size());
  for (int x : word) out.push_back(inputs_[static_cast<std::size_t>(x)]);
  return out;
}

Word MealyMachine::decode_outputs(std::span<const int> word) const {
  Word out;
  out.reserve(word.size());
  for (int y : word) out.push_back(outputs_[static_cast<std::size_t>(y)]);
  return out;
}

std::vector<int> MealyMachine::reachable_states() const {
  std::vector<int> order{initial_};
  std::vector<bool> seen(states_.size(), false);
  seen[static_cast<std::size_t>(initial_)] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int x = 0; x < input_count(); ++x) {
      if (const auto& e = edge(order[k], x); e && !seen[e->target]) {
        seen[e->target] = true;
        order.push_back(e->target);
      }
    }
  }
  return order;
}

bool MealyMachine::operator==(const MealyMachine& o) const {
  if (states_ != o.states_ || inputs_ != o.inputs_ || outputs_ != o.outputs_ ||
      initial_ != o.initial_)
    return false;
  for (std::size_t k = 0; k < table_.size(); ++k) {
    const auto& a = table_[k];
    const auto& b = o.table_[k];
    if (a.has_value() != b.has_value()) return false;
    if (a && (a->target != b->target || a->output != b->output)) return false;
  }
  return true;
}

ValidationReport validate(const MealyMachine& m) {
  return validate(m.describe());
}

bool run_indices(const MealyMachine& m, int state, std::span<const int> word,
                 std::vector<int>& outputs, int& reached) {
  outputs.clear();
  reached = state;
  for (int x : word) {
    const auto& e = m.edge(reached, x);
    if (!e) return false;
    outputs.push_back(e->output);
    reached = e->target;
  }
  return true;
}

RunResult run_from(const MealyMachine& m, const std::string& state,
                   std::span<const std::string> word) {
  auto s = m.state_index(state);
  if (!s) throw FormatError("unknown state '" + state + "'");
  auto encoded = m.encode_inputs(word);
  std::vector<int> outputs;
  int reached = *s;
  if (!run_indices(m, *s, encoded, outputs, reached))
    throw UndefinedTransition(m.states()[reached],
                              m.inputs()[encoded[outputs.size()]]);
  return {m.decode_outputs(outputs), m.states()[reached]};
}

RunResult run(const MealyMachine& m, std::span<const std::string> word) {
  return run_from(m, m.states()[m.initial()], word);
}

MealyMachine minimize(const MealyMachine& m) {
  if (!m.is_complete())
    throw PreconditionError("minimize requires a complete machine");

  auto reach = m.reachable_states();
  std::sort(reach.begin(), reach.end());
  const int n_in = m.input_count();

  // Initial blocks by output row, refined by successor blocks until stable.
  std::vector<int> block(m.state_count(), -1);
  {
    std::map<std::vector<int>, int> ids;
    for (int s : reach) {
      std::vector<int> row;
      for (int x = 0; x < n_in; ++x) row.push_back(m.edge(s, x)->output);
      block[s] = ids.try_emplace(row, static_cast<int>(ids.size())).first->second;
    }
  }
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(m.state_count(), -1);
    for (int s : reach) {
      std::vector<int> sig{block[s]};
      for (int x = 0; x < n_in; ++x) sig.push_back(block[m.edge(s, x)->target]);
      next[s] = ids.try_emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    bool stable = true;
    {
      std::set<int> before, after;
      for (int s : reach) {
        before.insert(block[s]);
        after.insert(next[s]);
      }
      stable = before.size() == after.size();
    }
    block = std::move(next);
    if (stable) break;
  }

  // Canonical naming: a block is represented by its first member in the
  // declared state order; blocks are listed in representative order.
  std::map<int, int> rep_of_block;
  for (int s : reach) rep_of_block.try_emplace(block[s], s);
  std::vector<int> reps;
  for (const auto& [b, s] : rep_of_block) reps.push_back(s);
  std::sort(reps.begin(), reps.end());

  MachineDescription d;
  for (int s : reps) d.states.push_back(m.states()[s]);
  d.initial = m.states()[rep_of_block[block[m.initial()]]];
  d.inputs = m.inputs();
  d.outputs = m.outputs();
  for (int s : reps) {
    for (int x = 0; x < n_in; ++x) {
      const auto& e = *m.edge(s, x);
      d.transitions.push_back({m.states()[s], m.inputs()[x],
                               m.states()[rep_of_block[block[e.target]]],
                               m.outputs()[e.output]});
    }
  }
  return MealyMachine::from_description(d);
}

namespace {

// BFS over state pairs of (possibly different) machines. `map_input` sends
// an input index of `a` to the matching index of `b`. Returns the first
// separating word in BFS/input order, or nullopt.
std::optional<std::vector<int>> separate(const MealyMachine& a, int sa,
                                         const MealyMachine& b, int sb,
                                         const std::vector<int>& map_input) {
  struct Node {
    int sa, sb, parent, input;
  };
  const int n_in = a.input_count();
  std::vector<Node> nodes{{sa, sb, -1, -1}};
  std::set<std::pair<int, int>> seen{{sa, sb}};
  auto trace_to = [&](int k, int last) {
    std::vector<int> w{last};
    for (; nodes[k].parent >= 0; k = nodes[k].parent) w.push_back(nodes[k].input);
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Node cur = nodes[k];
    for (int x = 0; x < n_in; ++x) {
      const auto& ea = a.edge(cur.sa, x);
      const auto& eb = b.edge(cur.sb, map_input[x]);
      if (!ea || !eb) throw PreconditionError("equivalence requires complete machines");
      if (a.outputs()[ea->output] != b.outputs()[eb->output])
        return trace_to(static_cast<int>(k), x);
      if (seen.insert({ea->target, eb->target}).second)
        nodes.push_back({ea->target, eb->target, static_cast<int>(k), x});
    }
  }
  return std::nullopt;
}

}  // namespace

EquivalenceResult equivalent(const MealyMachine& first,
                             const MealyMachine& second) {
  if (std::set(first.inputs().begin(), first.inputs().end()) !=
      std::set(second.inputs().begin(), second.inputs().end()))
    throw AlphabetMismatch("machines have different input alphabets");
  if (!first.is_complete() || !second.is_complete())
    throw PreconditionError("equivalence requires complete machines");
  std::vector<int> map_input;
  for (const auto& x : first.inputs()) map_input.push_back(*second.input_index(x));

  auto w = separate(first, first.initial(), second, second.initial(), map_input);
  if (!w) return {};
  Counterexample cex;
  cex.inputs = first.decode_inputs(*w);
  cex.first_outputs = run(first, cex.inputs).outputs;
  cex.second_outputs = run(second, cex.inputs).outputs;
  return {false, std::move(cex)};
}

std::optional<std::vector<int>> distinguishing_trace(const MealyMachine& m,
                                                     int s, int t) {
  if (s == t) return std::nullopt;
  std::vector<int> identity(static_cast<std::size_t>(m.input_count()));
  for (int x = 0; x < m.input_count(); ++x) identity[x] = x;
  return separate(m, s, m, t, identity);
}

std::optional<Word> distinguishing_trace(const MealyMachine& m,
                                         const std::string& s,
                                         const std::string& t) {
  auto si = m.state_index(s);
  auto ti = m.state_index(t);
  if (!si || !ti) throw FormatError("unknown state in distinguishing_trace");
  auto w = distinguishing_trace(m, *si, *ti);
  if (!w) return std::nullopt;
  return m.decode_inputs(*w);
}

bool is_minimal(const MealyMachine& m) {
  return m.is_complete() && minimize(m).state_count() == m.state_count();
}

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

std::string export_dot(const MealyMachine& m) {
  std::ostringstream os;
  os << "digraph fsm {\n  rankdir=LR;\n  node [shape=ellipse];\n"
     << "  __start [shape=point];\n  __start -> "
     << quoted(m.states()[m.initial()]) << ";\n";
  for (const auto& s : m.states()) os << "  " << quoted(s) << ";\n";
  for (int s = 0; s < m.state_count(); ++s)
    for (int x = 0; x < m.input_count(); ++x)
      if (const auto& e = m.edge(s, x))
        os << "  " << quoted(m.states()[s]) << " -> "
           << quoted(m.states()[e->target]) << " [label="
           << quoted(m.inputs()[x] + "/" + m.outputs()[e->output]) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace sct
