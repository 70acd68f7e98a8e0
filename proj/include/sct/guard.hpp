#pragma once

// Finite-sorted variables, valuations and the guard expression language.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sct {

/// Either an enumeration of named literals or a closed integer range.
class Sort {
 public:
  static Sort enumeration(std::vector<std::string> literals);
  static Sort range(std::int64_t lo, std::int64_t hi);
  /// The factor life-cycle sort {0, a, m}.
  static Sort phase();

  bool is_enum() const { return !literals_.empty(); }
  const std::vector<std::string>& literals() const { return literals_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  std::uint64_t size() const;

  bool operator==(const Sort&) const = default;

 private:
  std::vector<std::string> literals_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
};

enum class VarKind { monitored, controlled, factor };

const char* to_string(VarKind k);
VarKind var_kind_from_string(const std::string& s);

struct VarDecl {
  std::string name;
  Sort sort;
  VarKind kind = VarKind::monitored;

  bool operator==(const VarDecl&) const = default;
};

/// Declarations in their declared order. Names must be unique.
using DeclSet = std::vector<VarDecl>;

const VarDecl* find_decl(const DeclSet& decls, const std::string& name);

/// Throws FormatError on duplicate names and SortMismatch for empty sorts.
void check_decls(const DeclSet& decls);

using Value = std::variant<std::int64_t, std::string>;

/// Keys are sorted by name, which is also the canonical encoding order.
using Valuation = std::map<std::string, Value>;

bool value_in_sort(const Value& v, const Sort& s);
std::string value_text(const Value& v);

/// Throws SortMismatch/UndeclaredVariable unless `v` is total over `decls`
/// with every value inside its sort, and mentions nothing else.
void check_valuation(const Valuation& v, const DeclSet& decls);

/// Compact single-line encoding with sorted keys; enumeration literals as
/// strings, integers as numbers. Example: {"hs":"a","x":2}
std::string canonical_text(const Valuation& v);

// ---------------------------------------------------------------------------
// Guard expressions

enum class RelOp { eq, ne, lt, le, gt, ge };

const char* to_string(RelOp op);
RelOp complement(RelOp op);

struct GuardNode;
using Guard = std::shared_ptr<const GuardNode>;

struct GuardConst {
  bool value;
};
struct GuardCmp {
  std::string var;
  RelOp op;
  Value literal;
};
struct GuardNot {
  Guard operand;
};
struct GuardAnd {
  Guard lhs, rhs;
};
struct GuardOr {
  Guard lhs, rhs;
};

struct GuardNode {
  std::variant<GuardConst, GuardCmp, GuardNot, GuardAnd, GuardOr> node;
};

Guard make_const(bool v);
Guard make_cmp(std::string var, RelOp op, Value literal);
Guard make_not(Guard g);
Guard make_and(Guard a, Guard b);
Guard make_or(Guard a, Guard b);

bool structurally_equal(const Guard& a, const Guard& b);

/// Parses a guard and checks it against `decls`. Throws GuardSyntaxError,
/// UndeclaredVariable or SortMismatch.
Guard parse_guard(const std::string& text, const DeclSet& decls);

/// Fully parenthesized, lowercase keywords: `((x > 1) and (hs = a))`.
/// This text is the identity of a guard for deduplication and hashing.
std::string print_guard(const Guard& g);

/// Throws UndeclaredVariable if `v` lacks a variable the guard reads.
bool eval_guard(const Guard& g, const Valuation& v);

/// Every comparison node in left-to-right order.
std::vector<const GuardCmp*> comparisons(const Guard& g);

/// Copy of `g` with the `index`-th comparison replaced by its complement.
Guard flip_comparison(const Guard& g, std::size_t index);

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr std::uint64_t kDefaultEnumerationBound = 1'000'000;

/// Product of sort sizes; throws EnumerationOverflow above `bound`.
std::uint64_t valuation_count(const DeclSet& decls,
                              std::uint64_t bound = kDefaultEnumerationBound);

/// Visits valuations lexicographically over declaration order and sort
/// order. Stops early when `visit` returns false.
void for_each_valuation(const DeclSet& decls,
                        const std::function<bool(const Valuation&)>& visit,
                        std::uint64_t bound = kDefaultEnumerationBound);

std::vector<Valuation> enumerate_valuations(
    const DeclSet& decls, std::uint64_t bound = kDefaultEnumerationBound);

/// First satisfying valuation in enumeration order.
std::optional<Valuation> satisfiable(
    const Guard& g, const DeclSet& decls,
    std::uint64_t bound = kDefaultEnumerationBound);

}  // namespace sct
