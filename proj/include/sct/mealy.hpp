#pragma once

// Deterministic Mealy machines: construction, validation, execution,
// minimization and the product-machine equivalence oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sct {

using Word = std::vector<std::string>;

/// One row of a machine document. Rows are kept raw so that `validate` can
/// report problems a constructed `MealyMachine` cannot represent.
struct TransitionRow {
  std::string from;
  std::string input;
  std::string to;
  std::string output;

  bool operator==(const TransitionRow&) const = default;
};

struct MachineDescription {
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<TransitionRow> transitions;
};

struct ValidationReport {
  bool deterministic = true;
  bool complete = true;
  std::vector<std::pair<std::string, std::string>> missing;
  std::vector<std::pair<std::string, std::string>> duplicates;
  std::vector<std::string> unreachable;
  /// References to undeclared states or symbols, and a bad initial state.
  std::vector<std::string> dangling;
  /// Declared symbols no transition uses. Informational only.
  std::vector<std::string> unused;

  /// Findings that make the description unusable downstream.
  std::vector<std::string> errors() const;
  bool usable() const { return errors().empty(); }
};

ValidationReport validate(const MachineDescription& d);

/// Immutable, deterministic, possibly partial Mealy machine. States, inputs
/// and outputs keep their declared order; that order breaks every tie in
/// the algorithms below.
class MealyMachine {
 public:
  struct Edge {
    int target;
    int output;
  };

  /// Throws FormatError for dangling references or nondeterminism.
  static MealyMachine from_description(const MachineDescription& d);

  MachineDescription describe() const;

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  int initial() const { return initial_; }
  int state_count() const { return static_cast<int>(states_.size()); }
  int input_count() const { return static_cast<int>(inputs_.size()); }
  int output_count() const { return static_cast<int>(outputs_.size()); }

  const std::optional<Edge>& edge(int state, int input) const {
    return table_[static_cast<std::size_t>(state * input_count() + input)];
  }
  bool is_complete() const;

  std::optional<int> state_index(const std::string& name) const;
  std::optional<int> input_index(const std::string& name) const;
  std::optional<int> output_index(const std::string& name) const;

  /// Throws FormatError on unknown names.
  std::vector<int> encode_inputs(std::span<const std::string> word) const;
  Word decode_inputs(std::span<const int> word) const;
  Word decode_outputs(std::span<const int> word) const;

  /// States reachable from `initial()`, in BFS order.
  std::vector<int> reachable_states() const;

  bool operator==(const MealyMachine&) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  int initial_ = 0;
  std::vector<std::optional<Edge>> table_;
};

ValidationReport validate(const MealyMachine& m);

struct RunResult {
  Word outputs;
  std::string reached;
};

/// Throws UndefinedTransition at the first missing pair and FormatError on
/// unknown input symbols.
RunResult run(const MealyMachine& m, std::span<const std::string> word);
RunResult run_from(const MealyMachine& m, const std::string& state,
                   std::span<const std::string> word);

/// Index-level run used by hot loops. Returns false if a transition is
/// missing; `outputs` then holds the prefix produced so far.
bool run_indices(const MealyMachine& m, int state, std::span<const int> word,
                 std::vector<int>& outputs, int& reached);

/// Unreachable states are dropped, then the remaining states are merged by
/// partition refinement. Each block is named after its first member in the
/// declared order. Throws PreconditionError on incomplete machines.
MealyMachine minimize(const MealyMachine& m);

struct Counterexample {
  Word inputs;
  Word first_outputs;
  Word second_outputs;
};

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<Counterexample> counterexample;
};

/// Breadth-first traversal of the product machine. Input alphabets must
/// agree as sets; output symbols are compared by name. The counterexample
/// is a shortest one, lexicographically least in the first machine's input
/// order.
EquivalenceResult equivalent(const MealyMachine& first,
                             const MealyMachine& second);

/// Shortest input word separating two states, ties broken
/// lexicographically in the declared input order.
std::optional<Word> distinguishing_trace(const MealyMachine& m,
                                         const std::string& s,
                                         const std::string& t);
std::optional<std::vector<int>> distinguishing_trace(const MealyMachine& m,
                                                     int s, int t);

bool is_minimal(const MealyMachine& m);

std::string export_dot(const MealyMachine& m);

}  // namespace sct
