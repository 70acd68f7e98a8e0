#pragma once

// Safety-supervisor model: risk factors and their life-cycle phases, the
// controller behaviour exchange format, and its two translations: the
// guarded-action program that stands in for generated controller code, and
// the SFSM test reference.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sct/guard.hpp"
#include "sct/mealy.hpp"
#include "sct/sfsm.hpp"

namespace sct {

enum class Phase { inactive, active, mitigated };

/// "0", "a" or "m".
const char* phase_literal(Phase p);
Phase phase_from_literal(const std::string& s);

/// 0 -> a -> m -> 0, plus stutter.
bool lifecycle_allows(Phase from, Phase to);

/// Phases in factor declaration order.
struct RiskState {
  std::vector<Phase> phases;

  bool operator==(const RiskState&) const = default;
  auto operator<=>(const RiskState&) const = default;
};

/// `HS0_HCa_HRWm` style identifier.
std::string risk_state_name(const std::vector<std::string>& factors,
                            const RiskState& r);

struct BehaviorTransition {
  RiskState source;
  Guard guard;
  Valuation output;
  RiskState target;
};

struct ControllerBehavior {
  DeclSet inputs;
  DeclSet outputs;
  /// Factor variable names, declaration order.
  std::vector<std::string> factors;
  RiskState initial;
  std::vector<BehaviorTransition> transitions;
  std::vector<std::string> warnings;
};

/// Reads and validates a `.cb` document. Throws FormatError,
/// DisjointnessViolation, UndeclaredVariable, SortMismatch, GuardSyntaxError.
ControllerBehavior load_behavior(const std::filesystem::path& path);

/// One `<factor><phase>` segment per changed factor joined by `_`, or
/// `nop`. Throws LifecycleViolation.
std::string derive_action_name(const std::vector<std::string>& factors,
                               const RiskState& from, const RiskState& to);

/// How the interpreter picks among enabled actions. Translated programs
/// are disjoint, so both agree on them; `first_match` models an if/else
/// chain and is used for guard mutants.
enum class Resolution { unique, first_match };

struct ProgramState {
  std::string id;
  RiskState risk;
};

struct GuardedAction {
  std::string name;
  Guard guard;
  std::string source;
  Valuation output;
  std::string target;
};

struct GuardedActionProgram {
  DeclSet inputs;
  DeclSet outputs;
  std::vector<std::string> factors;
  std::vector<ProgramState> states;
  std::string initial;
  std::vector<GuardedAction> actions;
  IncompletePolicy policy = IncompletePolicy::error;
  Resolution resolution = Resolution::unique;
  std::vector<std::string> warnings;

  const ProgramState* state(const std::string& id) const;
};

/// Risk states reachable from the initial one, in BFS order over the
/// transition list. Unreachable states are reported in `warnings`.
std::vector<RiskState> reachable_risk_states(const ControllerBehavior& b,
                                             std::vector<std::string>* warnings);

/// Throws DeterminismViolation with the first overlap witness, or
/// LifecycleViolation.
GuardedActionProgram to_guarded_actions(
    const ControllerBehavior& b, IncompletePolicy policy = IncompletePolicy::error,
    std::uint64_t bound = kDefaultEnumerationBound);

struct StepResult {
  Valuation output;
  std::string target;
};

/// Throws IncompletenessError when nothing is enabled under the `error`
/// policy, DeterminismViolation when several actions are enabled under
/// `unique` resolution.
StepResult interpret_step(const GuardedActionProgram& p, const Valuation& input,
                          const std::string& state);

/// Holds the current risk state of one controller session. Actions are
/// indexed by source state once, so steps only scan the current state's
/// actions.
class Interpreter {
 public:
  explicit Interpreter(const GuardedActionProgram& p);

  void reset() { state_ = program_->initial; }
  /// Same contract as interpret_step.
  Valuation step(const Valuation& input);
  const std::string& current() const { return state_; }

 private:
  const GuardedActionProgram* program_;
  std::map<std::string, std::vector<const GuardedAction*>> by_source_;
  std::string state_;
};

Sfsm to_test_reference(const ControllerBehavior& b,
                       std::uint64_t bound = kDefaultEnumerationBound);

/// The reference view of a program: one SFSM transition per action.
Sfsm program_as_sfsm(const GuardedActionProgram& p);

struct ProgramCheck {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Structural soundness, determinism under the program's resolution, and
/// completeness under its policy.
ProgramCheck check_program(const GuardedActionProgram& p,
                           std::uint64_t bound = kDefaultEnumerationBound);

/// The program as a Mealy machine over the whole concrete input space:
/// inputs and outputs are canonical valuation texts, only reachable states
/// are kept. This is the exact oracle for program-level equivalence.
MealyMachine program_as_machine(const GuardedActionProgram& p,
                                std::uint64_t bound = kDefaultEnumerationBound);

struct HypothesisReport {
  std::size_t reference_states = 0;
  std::size_t program_states = 0;
  std::vector<std::string> diffs;
  bool pass() const { return diffs.empty(); }
};

/// Same number of control states, and per state the same multiset of
/// canonical guard texts.
HypothesisReport check_hypotheses(const GuardedActionProgram& p, const Sfsm& r);

}  // namespace sct
