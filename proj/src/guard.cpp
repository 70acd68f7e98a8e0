#include "sct/guard.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

#include "sct/error.hpp"

namespace sct {

Sort Sort::enumeration(std::vector<std::string> literals) {
  if (literals.empty()) throw SortMismatch("enumeration sort must be non-empty");
  std::set<std::string> seen(literals.begin(), literals.end());
  if (seen.size() != literals.size())
    throw SortMismatch("enumeration literals must be pairwise distinct");
  Sort s;
  s.literals_ = std::move(literals);
  return s;
}

Sort Sort::range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw SortMismatch("range sort requires lo <= hi");
  Sort s;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

Sort Sort::phase() { return enumeration({"0", "a", "m"}); }

std::uint64_t Sort::size() const {
  if (is_enum()) return literals_.size();
  return static_cast<std::uint64_t>(hi_ - lo_) + 1;
}

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::monitored: return "monitored";
    case VarKind::controlled: return "controlled";
    case VarKind::factor: return "factor";
  }
  return "?";
}

VarKind var_kind_from_string(const std::string& s) {
  if (s == "monitored" || s == "input") return VarKind::monitored;
  if (s == "controlled" || s == "output") return VarKind::controlled;
  if (s == "factor") return VarKind::factor;
  throw FormatError("unknown variable kind '" + s + "'");
}

const VarDecl* find_decl(const DeclSet& decls, const std::string& name) {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

void check_decls(const DeclSet& decls) {
  std::set<std::string> names;
  for (const auto& d : decls) {
    if (!names.insert(d.name).second)
      throw FormatError("duplicate variable '" + d.name + "'");
    if (d.sort.size() == 0) throw SortMismatch("empty sort for '" + d.name + "'");
  }
}

bool value_in_sort(const Value& v, const Sort& s) {
  if (s.is_enum()) {
    const auto* lit = std::get_if<std::string>(&v);
    return lit && std::find(s.literals().begin(), s.literals().end(), *lit) !=
                      s.literals().end();
  }
  const auto* n = std::get_if<std::int64_t>(&v);
  return n && *n >= s.lo() && *n <= s.hi();
}

std::string value_text(const Value& v) {
  if (const auto* n = std::get_if<std::int64_t>(&v)) return std::to_string(*n);
  return std::get<std::string>(v);
}

void check_valuation(const Valuation& v, const DeclSet& decls) {
  for (const auto& d : decls) {
    auto it = v.find(d.name);
    if (it == v.end()) throw SortMismatch("valuation has no value for '" + d.name + "'");
    if (!value_in_sort(it->second, d.sort))
      throw SortMismatch("value " + value_text(it->second) + " outside sort of '" +
                         d.name + "'");
  }
  for (const auto& [name, value] : v)
    if (!find_decl(decls, name)) throw UndeclaredVariable(name);
}

std::string canonical_text(const Valuation& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : v) {
    if (const auto* n = std::get_if<std::int64_t>(&value))
      j[name] = *n;
    else
      j[name] = std::get<std::string>(value);
  }
  return j.dump();
}

// ---------------------------------------------------------------------------

const char* to_string(RelOp op) {
  switch (op) {
    case RelOp::eq: return "=";
    case RelOp::ne: return "!=";
    case RelOp::lt: return "<";
    case RelOp::le: return "<=";
    case RelOp::gt: return ">";
    case RelOp::ge: return ">=";
  }
  return "?";
}

RelOp complement(RelOp op) {
  switch (op) {
    case RelOp::eq: return RelOp::ne;
    case RelOp::ne: return RelOp::eq;
    case RelOp::lt: return RelOp::ge;
    case RelOp::le: return RelOp::gt;
    case RelOp::gt: return RelOp::le;
    case RelOp::ge: return RelOp::lt;
  }
  return op;
}

Guard make_const(bool v) {
  return std::make_shared<const GuardNode>(GuardNode{GuardConst{v}});
}
Guard make_cmp(std::string var, RelOp op, Value literal) {
  return std::make_shared<const GuardNode>(
      GuardNode{GuardCmp{std::move(var), op, std::move(literal)}});
}
Guard make_not(Guard g) {
  return std::make_shared<const GuardNode>(GuardNode{GuardNot{std::move(g)}});
}
Guard make_and(Guard a, Guard b) {
  return std::make_shared<const GuardNode>(
      GuardNode{GuardAnd{std::move(a), std::move(b)}});
}
Guard make_or(Guard a, Guard b) {
  return std::make_shared<const GuardNode>(
      GuardNode{GuardOr{std::move(a), std::move(b)}});
}

bool structurally_equal(const Guard& a, const Guard& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, GuardConst>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, GuardCmp>) {
          return x.var == y.var && x.op == y.op && x.literal == y.literal;
        } else if constexpr (std::is_same_v<T, GuardNot>) {
          return structurally_equal(x.operand, y.operand);
        } else {
          return structurally_equal(x.lhs, y.lhs) &&
                 structurally_equal(x.rhs, y.rhs);
        }
      },
      a->node);
}

std::string print_guard(const Guard& g) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GuardConst>) {
          return x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, GuardCmp>) {
          return "(" + x.var + " " + to_string(x.op) + " " +
                 value_text(x.literal) + ")";
        } else if constexpr (std::is_same_v<T, GuardNot>) {
          return "(not " + print_guard(x.operand) + ")";
        } else if constexpr (std::is_same_v<T, GuardAnd>) {
          return "(" + print_guard(x.lhs) + " and " + print_guard(x.rhs) + ")";
        } else {
          return "(" + print_guard(x.lhs) + " or " + print_guard(x.rhs) + ")";
        }
      },
      g->node);
}

namespace {

bool compare(const Value& lhs, RelOp op, const Value& rhs) {
  if (const auto* a = std::get_if<std::int64_t>(&lhs)) {
    const auto* b = std::get_if<std::int64_t>(&rhs);
    if (!b) throw SortMismatch("integer compared with enumeration literal");
    switch (op) {
      case RelOp::eq: return *a == *b;
      case RelOp::ne: return *a != *b;
      case RelOp::lt: return *a < *b;
      case RelOp::le: return *a <= *b;
      case RelOp::gt: return *a > *b;
      case RelOp::ge: return *a >= *b;
    }
  }
  const auto& a = std::get<std::string>(lhs);
  const auto* b = std::get_if<std::string>(&rhs);
  if (!b) throw SortMismatch("enumeration literal compared with integer");
  if (op == RelOp::eq) return a == *b;
  if (op == RelOp::ne) return a != *b;
  throw SortMismatch("ordering on enumeration values");
}

}  // namespace

bool eval_guard(const Guard& g, const Valuation& v) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GuardConst>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, GuardCmp>) {
          auto it = v.find(x.var);
          if (it == v.end()) throw UndeclaredVariable(x.var);
          return compare(it->second, x.op, x.literal);
        } else if constexpr (std::is_same_v<T, GuardNot>) {
          return !eval_guard(x.operand, v);
        } else if constexpr (std::is_same_v<T, GuardAnd>) {
          return eval_guard(x.lhs, v) && eval_guard(x.rhs, v);
        } else {
          return eval_guard(x.lhs, v) || eval_guard(x.rhs, v);
        }
      },
      g->node);
}

namespace {

void collect(const Guard& g, std::vector<const GuardCmp*>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GuardCmp>) {
          out.push_back(&x);
        } else if constexpr (std::is_same_v<T, GuardNot>) {
          collect(x.operand, out);
        } else if constexpr (std::is_same_v<T, GuardAnd> ||
                             std::is_same_v<T, GuardOr>) {
          collect(x.lhs, out);
          collect(x.rhs, out);
        }
      },
      g->node);
}

Guard flip_at(const Guard& g, std::size_t& remaining) {
  return std::visit(
      [&](const auto& x) -> Guard {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GuardConst>) {
          return g;
        } else if constexpr (std::is_same_v<T, GuardCmp>) {
          if (remaining-- == 0) return make_cmp(x.var, complement(x.op), x.literal);
          return g;
        } else if constexpr (std::is_same_v<T, GuardNot>) {
          return make_not(flip_at(x.operand, remaining));
        } else if constexpr (std::is_same_v<T, GuardAnd>) {
          auto lhs = flip_at(x.lhs, remaining);
          return make_and(lhs, flip_at(x.rhs, remaining));
        } else {
          auto lhs = flip_at(x.lhs, remaining);
          return make_or(lhs, flip_at(x.rhs, remaining));
        }
      },
      g->node);
}

}  // namespace

std::vector<const GuardCmp*> comparisons(const Guard& g) {
  std::vector<const GuardCmp*> out;
  collect(g, out);
  return out;
}

Guard flip_comparison(const Guard& g, std::size_t index) {
  if (index >= comparisons(g).size())
    throw PreconditionError("comparison index out of range");
  return flip_at(g, index);
}

// ---------------------------------------------------------------------------

std::uint64_t valuation_count(const DeclSet& decls, std::uint64_t bound) {
  std::uint64_t total = 1;
  for (const auto& d : decls) {
    const auto size = d.sort.size();
    if (size != 0 && total > bound / size)
      throw EnumerationOverflow("valuation space exceeds bound " +
                                std::to_string(bound));
    total *= size;
  }
  if (total > bound)
    throw EnumerationOverflow("valuation space exceeds bound " +
                              std::to_string(bound));
  return total;
}

namespace {

Value nth_value(const Sort& s, std::uint64_t k) {
  if (s.is_enum()) return s.literals()[k];
  return s.lo() + static_cast<std::int64_t>(k);
}

}  // namespace

void for_each_valuation(const DeclSet& decls,
                        const std::function<bool(const Valuation&)>& visit,
                        std::uint64_t bound) {
  valuation_count(decls, bound);
  std::vector<std::uint64_t> digit(decls.size(), 0);
  Valuation v;
  for (const auto& d : decls) v[d.name] = nth_value(d.sort, 0);
  for (;;) {
    if (!visit(v)) return;
    // Odometer, last declaration varies fastest.
    std::size_t k = decls.size();
    for (;;) {
      if (k == 0) return;
      --k;
      if (++digit[k] < decls[k].sort.size()) {
        v[decls[k].name] = nth_value(decls[k].sort, digit[k]);
        break;
      }
      digit[k] = 0;
      v[decls[k].name] = nth_value(decls[k].sort, 0);
    }
  }
}

std::vector<Valuation> enumerate_valuations(const DeclSet& decls,
                                            std::uint64_t bound) {
  std::vector<Valuation> out;
  out.reserve(valuation_count(decls, bound));
  for_each_valuation(decls, [&](const Valuation& v) {
    out.push_back(v);
    return true;
  }, bound);
  return out;
}

std::optional<Valuation> satisfiable(const Guard& g, const DeclSet& decls,
                                     std::uint64_t bound) {
  std::optional<Valuation> found;
  for_each_valuation(decls, [&](const Valuation& v) {
    if (eval_guard(g, v)) {
      found = v;
      return false;
    }
    return true;
  }, bound);
  return found;
}

}  // namespace sct
