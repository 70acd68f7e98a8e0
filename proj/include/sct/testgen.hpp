#pragma once

// Complete test suite generation for deterministic, complete, minimal
// Mealy machines, and an independent completeness checker.

#include <string>
#include <vector>

#include "sct/mealy.hpp"
#include "sct/suite.hpp"

namespace sct {

/// One shortest access word per state, BFS in input order. The result is
/// prefix-closed and starts with the empty word. Throws PreconditionError
/// if some state is unreachable.
std::vector<Word> state_cover(const MealyMachine& m);

/// Greedy: for each state pair in declared order not yet separated, add
/// its distinguishing trace. Throws PreconditionError on non-minimal input.
std::vector<Word> characterization_set(const MealyMachine& m);

/// H-Method suite for implementations with at most `m_bound` states.
/// Throws PreconditionError unless `m` is complete and minimal with
/// n <= m_bound states.
TestSuite h_method(const MealyMachine& m, int m_bound);

/// W-Method suite V . Sigma^{<= m_bound-n+1} . W.
TestSuite w_method(const MealyMachine& m, int m_bound);

/// Expected outputs of `inputs` on the reference. Throws like `run`.
TestCase make_case(const MealyMachine& m, const Word& inputs);

/// Maximal elements of a word set, sorted lexicographically in the
/// machine's input order.
std::vector<Word> maximal_words(const MealyMachine& m, std::vector<Word> words);

struct CompletenessReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

/// Re-derives the H-conditions directly from the suite's word set and the
/// reference machine. Shares only run() and the data types with the
/// generator.
CompletenessReport check_h_completeness(const MealyMachine& m, int m_bound,
                                        const TestSuite& ts);

}  // namespace sct
