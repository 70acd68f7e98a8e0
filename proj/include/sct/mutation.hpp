#pragma once

// Mutant generation over machines and guarded-action programs, and mutant
// classification against a test suite with the product-machine oracle as
// the judge of equivalence.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sct/harness.hpp"
#include "sct/mealy.hpp"
#include "sct/suite.hpp"
#include "sct/supervisor.hpp"

namespace sct {

enum class MutationOperator { output_fault, transfer_fault, extra_state, guard_flip };

/// "output-fault", "transfer-fault", "extra-state", "guard-literal-flip".
const char* to_string(MutationOperator op);
/// Accepts the names above and the short forms output, transfer, extra,
/// flip, guard-flip.
MutationOperator operator_from_string(const std::string& s);

inline constexpr std::size_t kDefaultMutantLimit = 10'000;

struct MutationOptions {
  std::vector<MutationOperator> operators{MutationOperator::output_fault,
                                          MutationOperator::transfer_fault,
                                          MutationOperator::extra_state};
  /// Above this many candidates a fixed-seed uniform sample is taken.
  std::size_t limit = kDefaultMutantLimit;
  std::uint64_t seed = 1;
};

struct MachineMutant {
  std::string id;
  MutationOperator op;
  std::string locus;
  MealyMachine machine;
};

struct ProgramMutant {
  std::string id;
  MutationOperator op;
  std::string locus;
  GuardedActionProgram program;
};

/// Mutants in enumeration order; ids are `m<enumeration index>`. Guard
/// flips do not apply to machines and are ignored.
std::vector<MachineMutant> generate_mutants(const MealyMachine& m, const MutationOptions& opt);

/// Only well-formed mutants are kept: deterministic under the mutant's
/// resolution and complete under its policy. Guard flips switch the mutant
/// to first-match resolution.
std::vector<ProgramMutant> generate_mutants(const GuardedActionProgram& p,
                                            const MutationOptions& opt,
                                            std::uint64_t bound = kDefaultEnumerationBound);

/// Copy of `m` with state `q` cloned and the edge (`from`, `input`)
/// redirected to the clone. Behaviour is unchanged.
MealyMachine clone_state(const MealyMachine& m, int q, int from, int input);

/// Number of candidates before filtering and sampling.
std::size_t candidate_count(const MealyMachine& m, const MutationOptions& opt);

enum class OutcomeKind { equivalent, killed, escaped, error };
const char* to_string(OutcomeKind k);

struct Classification {
  OutcomeKind kind = OutcomeKind::escaped;
  /// First failing case, also recorded for equivalent mutants so that
  /// false failures are visible.
  std::optional<std::size_t> first_failing_case;
  std::string message;

  bool operator==(const Classification&) const = default;
};

struct MutationOutcome {
  std::string id;
  MutationOperator op;
  std::string locus;
  int states = 0;
  std::optional<Classification> oracle;
  std::optional<Classification> harness;

  /// The oracle-mode result when present, otherwise the harness one.
  const Classification& result() const { return oracle ? *oracle : *harness; }
  bool modes_agree() const { return !oracle || !harness || *oracle == *harness; }
};

enum class ClassifyMode { oracle, harness, both };
ClassifyMode classify_mode_from_string(const std::string& s);

struct ClassifyOptions {
  ClassifyMode mode = ClassifyMode::oracle;
  unsigned jobs = 1;
  std::uint64_t bound = kDefaultEnumerationBound;
};

using MachineSutFactory = std::function<std::unique_ptr<SutAdapter>(const MachineMutant&)>;
using ProgramSutFactory = std::function<std::unique_ptr<SutAdapter>(const ProgramMutant&)>;

/// Harness mode runs `symbolic_suite(suite)` against the factory's SUT.
MutationOutcome classify(const MealyMachine& reference, const TestSuite& suite,
                         const MachineMutant& mutant, const ClassifyOptions& opt,
                         const MachineSutFactory& factory = {});
MutationOutcome classify(const GuardedActionProgram& reference, const ConcreteSuite& suite,
                         const ProgramMutant& mutant, const ClassifyOptions& opt,
                         const ProgramSutFactory& factory = {});

/// Classifies independently per mutant on `opt.jobs` workers; results are
/// in mutant order.
std::vector<MutationOutcome> classify_all(const MealyMachine& reference,
                                          const TestSuite& suite,
                                          const std::vector<MachineMutant>& mutants,
                                          const ClassifyOptions& opt,
                                          const MachineSutFactory& factory = {});
std::vector<MutationOutcome> classify_all(const GuardedActionProgram& reference,
                                          const ConcreteSuite& suite,
                                          const std::vector<ProgramMutant>& mutants,
                                          const ClassifyOptions& opt,
                                          const ProgramSutFactory& factory = {});

struct MutationSummary {
  std::size_t total = 0;
  std::size_t killed = 0;
  std::size_t equivalent = 0;
  std::size_t escaped = 0;
  std::size_t errors = 0;
  /// Equivalent mutants on which some case failed.
  std::size_t false_failures = 0;
  /// Mutants whose oracle and harness classifications differ.
  std::size_t disagreements = 0;
  /// killed / (killed + escaped); empty when undefined.
  std::optional<double> score;
};

MutationSummary mutation_report(const std::vector<MutationOutcome>& outcomes);

nlohmann::json mutation_report_to_json(const std::vector<MutationOutcome>& outcomes);
std::string mutation_report_csv(const std::vector<MutationOutcome>& outcomes);
std::string mutation_summary_text(const MutationSummary& s);

}  // namespace sct
