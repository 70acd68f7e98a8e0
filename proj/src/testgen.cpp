#include "sct/testgen.hpp"

#include <algorithm>
#include <set>

#include "sct/codec.hpp"
#include "sct/error.hpp"

namespace sct {

namespace {

using IWord = std::vector<int>;

void require_reference(const MealyMachine& m, int m_bound) {
  if (!m.is_complete()) throw PreconditionError("reference machine is not complete");
  if (static_cast<int>(m.reachable_states().size()) != m.state_count())
    throw PreconditionError("reference machine has unreachable states");
  if (!is_minimal(m)) throw PreconditionError("reference machine is not minimal");
  if (m_bound < m.state_count())
    throw PreconditionError("mBound " + std::to_string(m_bound) +
                            " is smaller than the number of states " +
                            std::to_string(m.state_count()));
}

std::vector<IWord> cover_indices(const MealyMachine& m) {
  std::vector<IWord> access(static_cast<std::size_t>(m.state_count()));
  std::vector<bool> seen(static_cast<std::size_t>(m.state_count()), false);
  std::vector<int> order{m.initial()};
  seen[m.initial()] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int s = order[k];
    for (int x = 0; x < m.input_count(); ++x) {
      const auto& e = m.edge(s, x);
      if (!e || seen[e->target]) continue;
      seen[e->target] = true;
      access[e->target] = access[s];
      access[e->target].push_back(x);
      order.push_back(e->target);
    }
  }
  if (order.size() != access.size())
    throw PreconditionError("state cover requires every state to be reachable");
  std::vector<IWord> cover;
  for (int s : order) cover.push_back(access[s]);
  return cover;
}

/// Every word over `n_inputs` symbols of length exactly `len`, in
/// lexicographic order.
std::vector<IWord> words_of_length(int n_inputs, int len) {
  std::vector<IWord> out{IWord{}};
  for (int l = 0; l < len; ++l) {
    std::vector<IWord> next;
    next.reserve(out.size() * static_cast<std::size_t>(n_inputs));
    for (const auto& w : out)
      for (int x = 0; x < n_inputs; ++x) {
        next.push_back(w);
        next.back().push_back(x);
      }
    out = std::move(next);
  }
  return out;
}

// Prefix tree of input words annotated with reference states.
class PrefixTree {
 public:
  explicit PrefixTree(const MealyMachine& m) : m_(m) {
    nodes_.push_back({std::vector<int>(static_cast<std::size_t>(m.input_count()), -1),
                      m.initial(), -1, -1, 0});
  }

  int insert(const IWord& w) { return extend(0, w); }

  int extend(int node, std::span<const int> w) {
    for (int x : w) {
      int child = nodes_[node].child[x];
      if (child < 0) {
        child = static_cast<int>(nodes_.size());
        const int target = m_.edge(nodes_[node].state, x)->target;
        nodes_.push_back({std::vector<int>(static_cast<std::size_t>(m_.input_count()), -1),
                          target, node, x, nodes_[node].depth + 1});
        nodes_[node].child[x] = child;
      }
      node = child;
    }
    return node;
  }

  /// Number of symbols of `w` that would be new below `node`.
  int missing(int node, std::span<const int> w) const {
    int k = 0;
    for (; k < static_cast<int>(w.size()); ++k) {
      int child = nodes_[node].child[w[k]];
      if (child < 0) break;
      node = child;
    }
    return static_cast<int>(w.size()) - k;
  }

  int state(int node) const { return nodes_[node].state; }
  int child(int node, int x) const { return nodes_[node].child[x]; }

  IWord word(int node) const {
    IWord w;
    for (; nodes_[node].parent >= 0; node = nodes_[node].parent) w.push_back(nodes_[node].input);
    std::reverse(w.begin(), w.end());
    return w;
  }

  /// Leaves in DFS order, i.e. the maximal words sorted lexicographically.
  std::vector<IWord> leaves() const {
    std::vector<IWord> out;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      bool leaf = true;
      for (int x = m_.input_count() - 1; x >= 0; --x)
        if (nodes_[n].child[x] >= 0) {
          stack.push_back(nodes_[n].child[x]);
          leaf = false;
        }
      if (leaf) out.push_back(word(n));
    }
    return out;
  }

 private:
  struct Node {
    std::vector<int> child;
    int state;
    int parent;
    int input;
    int depth;
  };
  const MealyMachine& m_;
  std::vector<Node> nodes_;
};

// Does some word present below both nodes separate their states?
bool separated_in_tree(const MealyMachine& m, const PrefixTree& t, int a, int b) {
  std::vector<std::pair<int, int>> stack{{a, b}};
  std::set<std::pair<int, int>> visited;
  while (!stack.empty()) {
    auto [na, nb] = stack.back();
    stack.pop_back();
    const int sa = t.state(na), sb = t.state(nb);
    if (sa == sb) continue;
    for (int x = 0; x < m.input_count(); ++x) {
      const int ca = t.child(na, x), cb = t.child(nb, x);
      if (ca < 0 || cb < 0) continue;
      if (m.edge(sa, x)->output != m.edge(sb, x)->output) return true;
      if (visited.insert({ca, cb}).second) stack.push_back({ca, cb});
    }
  }
  return false;
}

bool separates(const MealyMachine& m, int s, int t, std::span<const int> w) {
  for (int x : w) {
    const auto& es = *m.edge(s, x);
    const auto& et = *m.edge(t, x);
    if (es.output != et.output) return true;
    s = es.target;
    t = et.target;
  }
  return false;
}

// Words of length `len` present below `node` that separate (s, t).
void collect_candidates(const MealyMachine& m, const PrefixTree& tree, int node, int s,
                        int t, std::size_t len, IWord& path, std::vector<IWord>& out) {
  if (path.size() == len) {
    if (separates(m, s, t, path)) out.push_back(path);
    return;
  }
  for (int x = 0; x < m.input_count(); ++x) {
    const int c = tree.child(node, x);
    if (c < 0) continue;
    path.push_back(x);
    collect_candidates(m, tree, c, s, t, len, path, out);
    path.pop_back();
  }
}

// Adds the cheapest shortest separating suffix for (a, b) unless one is
// already present below both nodes.
void ensure_separated(const MealyMachine& m, PrefixTree& tree, int a, int b) {
  const int sa = tree.state(a), sb = tree.state(b);
  if (sa == sb || separated_in_tree(m, tree, a, b)) return;
  const IWord shortest = *distinguishing_trace(m, sa, sb);
  std::vector<IWord> candidates{shortest};
  IWord path;
  collect_candidates(m, tree, a, sa, sb, shortest.size(), path, candidates);
  collect_candidates(m, tree, b, sa, sb, shortest.size(), path, candidates);

  const IWord* best = nullptr;
  int best_cost = 0;
  for (const auto& c : candidates) {
    const int cost = tree.missing(a, c) + tree.missing(b, c);
    if (!best || cost < best_cost || (cost == best_cost && c < *best)) {
      best = &c;
      best_cost = cost;
    }
  }
  const IWord gamma = *best;
  tree.extend(a, gamma);
  tree.extend(b, gamma);
}

TestSuite suite_from_words(const MealyMachine& m, const std::vector<IWord>& maximal,
                           const char* method, int m_bound) {
  TestSuite ts;
  ts.method = method;
  ts.m_bound = m_bound;
  ts.reference_fingerprint = machine_fingerprint(m);
  for (const auto& w : maximal) ts.cases.push_back(make_case(m, m.decode_inputs(w)));
  return ts;
}

}  // namespace

std::vector<Word> state_cover(const MealyMachine& m) {
  std::vector<Word> out;
  for (const auto& w : cover_indices(m)) out.push_back(m.decode_inputs(w));
  return out;
}

std::vector<Word> characterization_set(const MealyMachine& m) {
  if (!is_minimal(m)) throw PreconditionError("characterization set requires a minimal machine");
  std::vector<IWord> w;
  for (int s = 0; s < m.state_count(); ++s) {
    for (int t = s + 1; t < m.state_count(); ++t) {
      bool done = std::any_of(w.begin(), w.end(),
                              [&](const IWord& x) { return separates(m, s, t, x); });
      if (!done) w.push_back(*distinguishing_trace(m, s, t));
    }
  }
  std::vector<Word> out;
  for (const auto& x : w) out.push_back(m.decode_inputs(x));
  return out;
}

TestCase make_case(const MealyMachine& m, const Word& inputs) {
  return {inputs, run(m, inputs).outputs};
}

std::vector<Word> maximal_words(const MealyMachine& m, std::vector<Word> words) {
  std::vector<IWord> enc;
  for (const auto& w : words) enc.push_back(m.encode_inputs(w));
  std::sort(enc.begin(), enc.end());
  enc.erase(std::unique(enc.begin(), enc.end()), enc.end());
  std::vector<Word> out;
  for (std::size_t k = 0; k < enc.size(); ++k) {
    if (k + 1 < enc.size() && enc[k + 1].size() > enc[k].size() &&
        std::equal(enc[k].begin(), enc[k].end(), enc[k + 1].begin()))
      continue;
    out.push_back(m.decode_inputs(enc[k]));
  }
  return out;
}

TestSuite h_method(const MealyMachine& m, int m_bound) {
  require_reference(m, m_bound);
  const int depth = m_bound - m.state_count() + 1;
  const auto cover = cover_indices(m);
  PrefixTree tree(m);

  // V . Sigma^depth; shorter traversal words are its prefixes.
  std::vector<int> cover_nodes;
  for (const auto& v : cover) cover_nodes.push_back(tree.insert(v));
  std::set<IWord> cover_set(cover.begin(), cover.end());
  std::vector<IWord> maximal_traversal;
  std::vector<int> traversal_nodes;  // V . Sigma^{<=depth} \ V
  for (int len = 0; len <= depth; ++len) {
    for (const auto& v : cover) {
      for (const auto& ext : words_of_length(m.input_count(), len)) {
        IWord w = v;
        w.insert(w.end(), ext.begin(), ext.end());
        const int node = tree.insert(w);
        if (len == depth) maximal_traversal.push_back(w);
        if (!cover_set.contains(w)) traversal_nodes.push_back(node);
      }
    }
  }

  std::set<std::pair<int, int>> done;
  auto require = [&](int a, int b) {
    if (a == b || tree.state(a) == tree.state(b)) return;
    if (!done.insert({std::min(a, b), std::max(a, b)}).second) return;
    ensure_separated(m, tree, a, b);
  };

  // (a) cover against cover
  for (std::size_t i = 0; i < cover_nodes.size(); ++i)
    for (std::size_t j = i + 1; j < cover_nodes.size(); ++j) require(cover_nodes[i], cover_nodes[j]);
  // (b) cover against traversal
  for (int a : cover_nodes)
    for (int b : traversal_nodes) require(a, b);
  // (c) prefixes of each traversal word against each other
  for (const auto& w : maximal_traversal) {
    std::vector<int> prefix_nodes;
    for (std::size_t len = 1; len <= w.size(); ++len)
      prefix_nodes.push_back(tree.insert(IWord(w.begin(), w.begin() + static_cast<long>(len))));
    for (std::size_t i = 0; i < prefix_nodes.size(); ++i)
      for (std::size_t j = i + 1; j < prefix_nodes.size(); ++j)
        require(prefix_nodes[i], prefix_nodes[j]);
  }

  return suite_from_words(m, tree.leaves(), "H", m_bound);
}

TestSuite w_method(const MealyMachine& m, int m_bound) {
  require_reference(m, m_bound);
  const int depth = m_bound - m.state_count() + 1;
  const auto cover = cover_indices(m);
  std::vector<IWord> w;
  for (const auto& x : characterization_set(m)) w.push_back(m.encode_inputs(x));
  if (w.empty()) w.push_back({});

  PrefixTree tree(m);
  for (const auto& v : cover)
    for (int len = 0; len <= depth; ++len)
      for (const auto& ext : words_of_length(m.input_count(), len))
        for (const auto& suffix : w) {
          IWord word = v;
          word.insert(word.end(), ext.begin(), ext.end());
          word.insert(word.end(), suffix.begin(), suffix.end());
          tree.insert(word);
        }
  return suite_from_words(m, tree.leaves(), "W", m_bound);
}

}  // namespace sct
