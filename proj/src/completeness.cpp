// Suite completeness checker. Deliberately written against the word set of
// the suite (sorted vectors and binary search) rather than the generator's
// prefix tree, so that a defect in one is unlikely to be mirrored in the
// other.

#include <algorithm>
#include <map>
#include <set>

#include "sct/codec.hpp"
#include "sct/testgen.hpp"

namespace sct {

namespace {

using IWord = std::vector<int>;

std::string show(const MealyMachine& m, const IWord& w) {
  std::string s = "<";
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += ",";
    s += m.inputs()[w[k]];
  }
  return s + ">";
}

bool starts_with(const IWord& w, const IWord& prefix) {
  return w.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

class WordSet {
 public:
  explicit WordSet(std::set<IWord> words) : words_(words.begin(), words.end()) {}

  bool contains(const IWord& w) const {
    return std::binary_search(words_.begin(), words_.end(), w);
  }

  /// All stored words having `prefix` as a prefix, as an iterator range.
  std::pair<std::vector<IWord>::const_iterator, std::vector<IWord>::const_iterator>
  with_prefix(const IWord& prefix) const {
    auto lo = std::lower_bound(words_.begin(), words_.end(), prefix);
    auto hi = std::partition_point(lo, words_.end(),
                                   [&](const IWord& w) { return starts_with(w, prefix); });
    return {lo, hi};
  }

  const std::vector<IWord>& all() const { return words_; }

 private:
  std::vector<IWord> words_;
};

int reached(const MealyMachine& m, const IWord& w) {
  int s = m.initial();
  for (int x : w) s = m.edge(s, x)->target;
  return s;
}

std::vector<int> outputs_from(const MealyMachine& m, int s, std::span<const int> w) {
  std::vector<int> out;
  for (int x : w) {
    const auto& e = *m.edge(s, x);
    out.push_back(e.output);
    s = e.target;
  }
  return out;
}

// Some gamma with alpha.gamma and beta.gamma in the set and different
// outputs from the two reached states.
bool has_separating_extension(const MealyMachine& m, const WordSet& ts, const IWord& alpha,
                              const IWord& beta) {
  const int sa = reached(m, alpha);
  const int sb = reached(m, beta);
  auto ra = ts.with_prefix(alpha);
  auto rb = ts.with_prefix(beta);
  const bool use_alpha = (ra.second - ra.first) <= (rb.second - rb.first);
  const IWord& base = use_alpha ? alpha : beta;
  const IWord& other = use_alpha ? beta : alpha;
  auto [lo, hi] = use_alpha ? ra : rb;
  for (auto it = lo; it != hi; ++it) {
    std::span<const int> gamma(it->begin() + static_cast<long>(base.size()), it->end());
    if (gamma.empty()) continue;
    IWord mirrored = other;
    mirrored.insert(mirrored.end(), gamma.begin(), gamma.end());
    if (!ts.contains(mirrored)) continue;
    if (outputs_from(m, sa, gamma) != outputs_from(m, sb, gamma)) return true;
  }
  return false;
}

}  // namespace

CompletenessReport check_h_completeness(const MealyMachine& m, int m_bound,
                                        const TestSuite& ts) {
  CompletenessReport rep;
  const int n = m.state_count();
  if (!m.is_complete() || !is_minimal(m) ||
      static_cast<int>(m.reachable_states().size()) != n) {
    rep.violations.push_back("precondition: reference must be complete, reachable and minimal");
    return rep;
  }
  if (m_bound < n) {
    rep.violations.push_back("precondition: mBound " + std::to_string(m_bound) + " < n = " +
                             std::to_string(n));
    return rep;
  }
  if (!ts.reference_fingerprint.empty() && ts.reference_fingerprint != machine_fingerprint(m))
    rep.violations.push_back("suite fingerprint does not match the reference machine");

  std::set<IWord> closure{IWord{}};
  for (std::size_t c = 0; c < ts.cases.size(); ++c) {
    const auto& tc = ts.cases[c];
    IWord w;
    for (const auto& x : tc.inputs) {
      auto k = m.input_index(x);
      if (!k) {
        rep.violations.push_back("case " + std::to_string(c) + ": unknown input '" + x + "'");
        return rep;
      }
      w.push_back(*k);
    }
    if (m.decode_outputs(outputs_from(m, m.initial(), w)) != tc.expected)
      rep.violations.push_back("case " + std::to_string(c) +
                               ": expected outputs disagree with the reference");
    for (std::size_t len = 0; len <= w.size(); ++len)
      closure.insert(IWord(w.begin(), w.begin() + static_cast<long>(len)));
  }
  const WordSet words(std::move(closure));

  // H1: a cover drawn from the suite, shortest then least word per state.
  std::vector<IWord> by_shortlex = words.all();
  std::stable_sort(by_shortlex.begin(), by_shortlex.end(),
                   [](const IWord& a, const IWord& b) { return a.size() < b.size(); });
  std::map<int, IWord> cover;
  for (const auto& w : by_shortlex) cover.try_emplace(reached(m, w), w);
  for (int s = 0; s < n; ++s)
    if (!cover.contains(s)) rep.violations.push_back("H1: no trace reaches state " + m.states()[s]);
  if (!rep.pass()) return rep;

  const int depth = m_bound - n + 1;
  std::set<IWord> cover_words;
  for (const auto& [s, w] : cover) cover_words.insert(w);

  // V . Sigma^{<=depth}, generated by odometer over each length.
  std::vector<IWord> traversal;
  std::vector<IWord> traversal_max;
  for (const auto& v : cover_words) {
    for (int len = 0; len <= depth; ++len) {
      IWord ext(static_cast<std::size_t>(len), 0);
      for (;;) {
        IWord w = v;
        w.insert(w.end(), ext.begin(), ext.end());
        traversal.push_back(w);
        if (len == depth) traversal_max.push_back(w);
        int k = len - 1;
        while (k >= 0 && ++ext[k] == m.input_count()) ext[k--] = 0;
        if (k < 0) break;
      }
    }
  }

  // H2
  for (const auto& w : traversal_max)
    if (!words.contains(w)) rep.violations.push_back("H2: missing traversal trace " + show(m, w));

  std::set<std::pair<IWord, IWord>> checked;
  auto check_pair = [&](const char* tag, const IWord& a, const IWord& b) {
    if (a == b || reached(m, a) == reached(m, b)) return;
    auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    if (!checked.insert(key).second) return;
    if (!has_separating_extension(m, words, a, b))
      rep.violations.push_back(std::string(tag) + ": pair (" + show(m, a) + ", " + show(m, b) +
                               ") has no separating extension in the suite");
  };

  for (auto i = cover_words.begin(); i != cover_words.end(); ++i)
    for (auto j = std::next(i); j != cover_words.end(); ++j) check_pair("H3(a)", *i, *j);
  for (const auto& a : cover_words)
    for (const auto& b : traversal)
      if (!cover_words.contains(b)) check_pair("H3(b)", a, b);
  for (const auto& w : traversal) {
    for (std::size_t i = 1; i <= w.size(); ++i)
      for (std::size_t j = i + 1; j <= w.size(); ++j)
        check_pair("H3(c)", IWord(w.begin(), w.begin() + static_cast<long>(i)),
                   IWord(w.begin(), w.begin() + static_cast<long>(j)));
  }
  return rep;
}

}  // namespace sct
