#pragma once

// Symbolic finite state machines over finite-sorted variables, their input
// equivalence classes, and the abstraction to (and refinement from) the
// Mealy machine world.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sct/guard.hpp"
#include "sct/mealy.hpp"
#include "sct/suite.hpp"

namespace sct {

enum class IncompletePolicy { error, complete_with_selfloop };

const char* to_string(IncompletePolicy p);
IncompletePolicy policy_from_string(const std::string& s);

/// Output label emitted by synthesized self-loops; its valuation is empty.
inline constexpr const char* kNilLabel = "nil";

struct SfsmTransition {
  std::string from;
  std::string action;
  Guard guard;
  Valuation output;
  std::string to;
};

struct Sfsm {
  DeclSet input_vars;
  DeclSet output_vars;
  std::vector<std::string> states;
  std::string initial;
  std::vector<SfsmTransition> transitions;
};

/// Structural checks: declared states, guards over inputs only, outputs
/// total over output_vars. Throws FormatError/SortMismatch.
void check_structure(const Sfsm& r);

struct SfsmCheck {
  /// Overlapping guards out of one state, with the first common witness.
  std::vector<std::string> overlaps;
  /// (state, first input valuation enabling nothing).
  std::vector<std::pair<std::string, std::string>> gaps;
  bool deterministic() const { return overlaps.empty(); }
  bool complete() const { return gaps.empty(); }
};

/// Determinism and completeness by enumeration of the input space.
SfsmCheck check_sfsm(const Sfsm& r,
                     std::uint64_t bound = kDefaultEnumerationBound);

struct InputClass {
  std::string id;
  std::vector<bool> signature;
  Valuation representative;
  std::uint64_t size = 0;
};

struct InputClassPartition {
  /// Distinct guards by canonical print, in first-occurrence order.
  std::vector<std::string> guards;
  std::vector<InputClass> classes;

  const InputClass* find(const std::string& id) const;
};

/// Guard truth vector of `v` over `guards` (canonical prints parsed back
/// against `decls`).
std::vector<bool> signature_of(const std::vector<Guard>& guards,
                               const Valuation& v);

std::vector<Guard> distinct_guards(const Sfsm& r);

InputClassPartition input_classes(const Sfsm& r,
                                  std::uint64_t bound = kDefaultEnumerationBound);

struct AbstractionMap {
  std::map<std::string, Valuation> class_representative;
  std::map<std::string, Valuation> output_valuation;

  /// Output label of a valuation, if the map knows it.
  std::optional<std::string> label_of(const Valuation& out) const;
};

struct Abstraction {
  MealyMachine fsm;
  AbstractionMap map;
  InputClassPartition partition;
};

/// FSM inputs are class ids, outputs are labels o0, o1, ... in canonical
/// order of the distinct output valuations (plus `nil` when self-loops
/// were synthesized). Throws DeterminismViolation / IncompletenessError.
Abstraction abstract_to_fsm(const Sfsm& r,
                            IncompletePolicy policy = IncompletePolicy::error,
                            std::uint64_t bound = kDefaultEnumerationBound);

/// One SFSM step at a concrete valuation: (target, output) of the unique
/// enabled transition, or nullopt if none is enabled.
struct SfsmStep {
  std::string target;
  Valuation output;
};
std::optional<SfsmStep> sfsm_step(const Sfsm& r, const std::string& state,
                                  const Valuation& input);

/// Symbol-wise substitution of class ids by representatives and of output
/// labels by valuations. Throws FormatError on unknown ids or labels.
ConcreteSuite concretize_suite(const TestSuite& ts, const AbstractionMap& map);

/// FNV-1a 64 over canonical_text(v).
std::uint64_t hash_label(const Valuation& v);

/// Nodes are states; each edge is labelled `action:h(i)/h(o)` where i is
/// the first valuation satisfying the guard.
std::string export_dot(const Sfsm& r,
                       std::uint64_t bound = kDefaultEnumerationBound);

}  // namespace sct
