#pragma once

// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sct/mealy.hpp"
#include "sct/sfsm.hpp"
#include "sct/guard.hpp"
#include "sct/suite.hpp"

namespace sct::test {

/// s0 -a/1-> s1, s0 -b/0-> s0, s1 -a/0-> s0, s1 -b/1-> s1
inline MachineDescription m0_description() {
  MachineDescription d;
  d.states = {"s0", "s1"};
  d.initial = "s0";
  d.inputs = {"a", "b"};
  d.outputs = {"0", "1"};
  d.transitions = {{"s0", "a", "s1", "1"},
                   {"s0", "b", "s0", "0"},
                   {"s1", "a", "s0", "0"},
                   {"s1", "b", "s1", "1"}};
  return d;
}

inline MealyMachine m0() { return MealyMachine::from_description(m0_description()); }

inline MealyMachine single_state(int inputs = 2) {
  MachineDescription d;
  d.states = {"s0"};
  d.initial = "s0";
  d.outputs = {"0"};
  for (int k = 0; k < inputs; ++k) {
    std::string x(1, static_cast<char>('a' + k));
    d.inputs.push_back(x);
    d.transitions.push_back({"s0", x, "s0", "0"});
  }
  return MealyMachine::from_description(d);
}

/// Random complete machine whose states are all reachable (a random
/// spanning tree is laid down first). Not necessarily minimal.
inline MealyMachine random_machine(std::mt19937_64& rng, int n, int ni, int no) {
  auto pick = [&](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };
  MachineDescription d;
  for (int s = 0; s < n; ++s) d.states.push_back("q" + std::to_string(s));
  for (int x = 0; x < ni; ++x) d.inputs.push_back(std::string(1, static_cast<char>('a' + x)));
  for (int y = 0; y < no; ++y) d.outputs.push_back(std::to_string(y));
  d.initial = "q0";
  std::vector<int> target(static_cast<std::size_t>(n * ni), -1);
  for (int s = 1; s < n; ++s) {
    // Attach s below some earlier state on a free input.
    for (;;) {
      int p = pick(s), x = pick(ni);
      auto& slot = target[static_cast<std::size_t>(p * ni + x)];
      if (slot < 0) {
        slot = s;
        break;
      }
    }
  }
  for (int s = 0; s < n; ++s)
    for (int x = 0; x < ni; ++x) {
      auto& slot = target[static_cast<std::size_t>(s * ni + x)];
      if (slot < 0) slot = pick(n);
      d.transitions.push_back({d.states[s], d.inputs[x], d.states[slot], d.outputs[pick(no)]});
    }
  return MealyMachine::from_description(d);
}

/// Output word from `s`, computed by direct table walking.
inline std::vector<int> walk(const MealyMachine& m, int s, const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    out.push_back(m.edge(s, x)->output);
    s = m.edge(s, x)->target;
  }
  return out;
}

/// All words over `ni` inputs of exactly `len` symbols, lexicographic.
inline std::vector<std::vector<int>> all_words(int ni, int len) {
  std::vector<std::vector<int>> out{{}};
  for (int k = 0; k < len; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& w : out)
      for (int x = 0; x < ni; ++x) {
        auto v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

/// Brute force: s and t are distinguishable iff some word of length at
/// most `depth` tells them apart. n-1 suffices for n-state machines.
inline bool brute_distinguishable(const MealyMachine& m, int s, int t, int depth) {
  for (int len = 1; len <= depth; ++len)
    for (const auto& w : all_words(m.input_count(), len))
      if (walk(m, s, w) != walk(m, t, w)) return true;
  return false;
}

inline bool brute_minimal(const MealyMachine& m) {
  const int n = m.state_count();
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      if (!brute_distinguishable(m, s, t, std::max(1, n - 1))) return false;
  return true;
}

/// Random minimal machine by rejection sampling against the brute-force
/// oracle.
inline MealyMachine random_minimal_machine(std::mt19937_64& rng, int n, int ni, int no) {
  for (;;) {
    auto m = random_machine(rng, n, ni, no);
    if (brute_minimal(m)) return m;
  }
}

/// Brute-force equivalence of two machines over a common input alphabet,
/// by comparing every word of up to na + nb - 1 symbols (enough to split
/// any two inequivalent states of the disjoint union). Tiny machines only.
inline bool brute_equivalent(const MealyMachine& a, const MealyMachine& b) {
  const int depth = a.state_count() + b.state_count() - 1;
  for (int len = 1; len <= depth; ++len) {
    for (const auto& w : all_words(a.input_count(), len)) {
      auto oa = a.decode_outputs(walk(a, a.initial(), w));
      std::vector<int> wb;
      for (int x : w) wb.push_back(*b.input_index(a.inputs()[x]));
      if (oa != b.decode_outputs(walk(b, b.initial(), wb))) return false;
    }
  }
  return true;
}

inline DeclSet decls_x03() { return {{"x", Sort::range(0, 3), VarKind::monitored}}; }

/// Random guard over `decls` with at most `depth` levels of connectives.
inline Guard random_guard(std::mt19937_64& rng, const DeclSet& decls, int depth) {
  const auto pick = [&](std::uint64_t n) { return rng() % n; };
  if (depth == 0 || pick(3) == 0) {
    const auto& d = decls[pick(decls.size())];
    if (d.sort.is_enum())
      return make_cmp(d.name, pick(2) ? RelOp::eq : RelOp::ne,
                      d.sort.literals()[pick(d.sort.literals().size())]);
    return make_cmp(d.name, static_cast<RelOp>(pick(6)),
                    d.sort.lo() + static_cast<std::int64_t>(pick(d.sort.size())));
  }
  if (pick(4) == 0) return make_not(random_guard(rng, decls, depth - 1));
  auto a = random_guard(rng, decls, depth - 1);
  auto b = random_guard(rng, decls, depth - 1);
  return pick(2) ? make_and(a, b) : make_or(a, b);
}

/// Random deterministic, complete SFSM. Each state's guards come from a
/// random decision list g1, !g1 & g2, ..., !(g1 | ... | gk), so they are
/// disjoint and exhaustive by construction. Some may be unsatisfiable.
inline Sfsm random_sfsm(std::mt19937_64& rng, int n) {
  const auto pick = [&](std::uint64_t k) { return rng() % k; };
  Sfsm r;
  r.input_vars = {{"x", Sort::range(0, 3), VarKind::monitored},
                  {"hs", Sort::phase(), VarKind::monitored}};
  r.output_vars = {{"y", Sort::range(0, 2), VarKind::controlled},
                   {"al", Sort::enumeration({"off", "on"}), VarKind::controlled}};
  for (int s = 0; s < n; ++s) r.states.push_back("r" + std::to_string(s));
  r.initial = "r0";
  for (int s = 0; s < n; ++s) {
    const int k = 1 + static_cast<int>(pick(3));
    Guard seen = make_const(false);
    for (int i = 0; i <= k; ++i) {
      Guard g = i == k ? make_not(seen) : make_and(make_not(seen), random_guard(rng, r.input_vars, 2));
      if (i < k) seen = make_or(seen, g);
      Valuation out{{"y", static_cast<std::int64_t>(pick(3))},
                    {"al", std::string(pick(2) ? "on" : "off")}};
      // State s+1 is always reachable through the exhaustive final guard.
      const int to = i == k && s + 1 < n ? s + 1 : static_cast<int>(pick(static_cast<std::uint64_t>(n)));
      r.transitions.push_back({r.states[s], "t" + std::to_string(r.transitions.size()), g, out,
                               r.states[to]});
    }
  }
  return r;
}

/// Brute-force SFSM step by direct guard evaluation: the transitions of
/// `state` enabled at `v`.
inline std::vector<const SfsmTransition*> enabled(const Sfsm& r, const std::string& state,
                                                  const Valuation& v) {
  std::vector<const SfsmTransition*> out;
  for (const auto& t : r.transitions)
    if (t.from == state && eval_guard(t.guard, v)) out.push_back(&t);
  return out;
}

/// Prefix closure of a suite's input words, including the empty word.
inline std::set<Word> prefix_closure(const TestSuite& ts, std::size_t skip = static_cast<std::size_t>(-1)) {
  std::set<Word> out{Word{}};
  for (std::size_t c = 0; c < ts.cases.size(); ++c) {
    if (c == skip) continue;
    const auto& w = ts.cases[c].inputs;
    for (std::size_t k = 1; k <= w.size(); ++k) out.insert(Word(w.begin(), w.begin() + static_cast<long>(k)));
  }
  return out;
}

/// Shortlex-least access word per state, by enumerating words by length.
inline std::vector<Word> brute_cover(const MealyMachine& m) {
  std::vector<Word> cover(static_cast<std::size_t>(m.state_count()));
  std::vector<bool> found(cover.size(), false);
  std::size_t left = cover.size();
  for (int len = 0; left > 0 && len < m.state_count(); ++len)
    for (const auto& w : all_words(m.input_count(), len)) {
      int s = m.initial();
      for (int x : w) s = m.edge(s, x)->target;
      if (found[static_cast<std::size_t>(s)]) continue;
      found[static_cast<std::size_t>(s)] = true;
      cover[static_cast<std::size_t>(s)] = m.decode_inputs(w);
      --left;
    }
  return cover;
}

/// Cover words extended by every input word of exactly `len` symbols.
inline std::vector<Word> extensions(const MealyMachine& m, const std::vector<Word>& cover, int len) {
  std::vector<Word> out;
  for (const auto& v : cover)
    for (const auto& e : all_words(m.input_count(), len)) {
      Word w = v;
      for (int x : e) w.push_back(m.inputs()[x]);
      out.push_back(std::move(w));
    }
  return out;
}

/// Whether words `a` and `b` have a common continuation in `words` that
/// yields different outputs from the states they reach.
inline bool separated_within(const MealyMachine& m, const Word& a, const Word& b,
                             const std::set<Word>& words) {
  for (const auto& wa : words) {
    if (wa.size() <= a.size() || !std::equal(a.begin(), a.end(), wa.begin())) continue;
    Word wb = b;
    wb.insert(wb.end(), wa.begin() + static_cast<long>(a.size()), wa.end());
    if (!words.contains(wb)) continue;
    const auto oa = run(m, wa).outputs, ob = run(m, wb).outputs;
    if (!std::equal(oa.begin() + static_cast<long>(a.size()), oa.end(),
                    ob.begin() + static_cast<long>(b.size())))
      return true;
  }
  return false;
}

/// Cover pairs reaching different states that `words` does not separate.
inline std::vector<std::pair<Word, Word>> unseparated_cover_pairs(const MealyMachine& m,
                                                                  const std::vector<Word>& cover,
                                                                  const std::set<Word>& words) {
  std::vector<std::pair<Word, Word>> out;
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = i + 1; j < cover.size(); ++j)
      if (!separated_within(m, cover[i], cover[j], words)) out.emplace_back(cover[i], cover[j]);
  return out;
}

inline std::string show_word(const Word& w) {
  std::string s = "<";
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + w[k];
  return s + ">";
}

}  // namespace sct::test
