#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <unistd.h>

#include "sct/codec.hpp"
#include "sct/harness.hpp"
#include "sct/mutation.hpp"
#include "sct/testgen.hpp"
#include "support.hpp"

using namespace sct;
using test::m0;

namespace {

namespace fs = std::filesystem;

MutationOptions only(MutationOperator op) {
  MutationOptions o;
  o.operators = {op};
  return o;
}

/// Number of rows on which two descriptions over the same states differ.
int row_diff(const MealyMachine& a, const MealyMachine& b) {
  int diff = 0;
  for (int s = 0; s < a.state_count(); ++s)
    for (int x = 0; x < a.input_count(); ++x) {
      const auto& ea = a.edge(s, x);
      const auto& eb = b.edge(s, x);
      diff += ea->target != eb->target || a.outputs()[ea->output] != b.outputs()[eb->output];
    }
  return diff;
}

GuardedActionProgram welding_program() {
  return to_guarded_actions(load_behavior(fs::path(SCT_SOURCE_DIR) / "models/welding-cell.cb"),
                            IncompletePolicy::complete_with_selfloop);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("sct-mutation-" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("M0 output and transfer faults") {
  const auto out = generate_mutants(m0(), only(MutationOperator::output_fault));
  REQUIRE(out.size() == 4);
  std::set<std::string> loci;
  for (const auto& mu : out) {
    CHECK(mu.op == MutationOperator::output_fault);
    CHECK(row_diff(m0(), mu.machine) == 1);
    loci.insert(mu.locus);
  }
  CHECK(loci.size() == 4);
  CHECK(out[0].id == "m0");
  CHECK(out[3].id == "m3");

  const auto tr = generate_mutants(m0(), only(MutationOperator::transfer_fault));
  REQUIRE(tr.size() == 4);
  for (const auto& mu : tr) {
    CHECK(row_diff(m0(), mu.machine) == 1);
    CHECK(mu.machine.state_count() == 2);
  }

  auto none = only(MutationOperator::output_fault);
  none.limit = 0;
  CHECK(generate_mutants(m0(), none).empty());
  CHECK(generate_mutants(m0(), only(MutationOperator::guard_flip)).empty());
}

TEST_CASE("extra-state mutants") {
  const auto ex = generate_mutants(m0(), only(MutationOperator::extra_state));
  CHECK(ex.size() == candidate_count(m0(), only(MutationOperator::extra_state)));
  REQUIRE_FALSE(ex.empty());
  for (const auto& mu : ex) {
    CHECK(mu.machine.state_count() == 3);
    CHECK(mu.machine.is_complete());
  }
  // The unperturbed clone behaves like the original.
  const auto clone = clone_state(m0(), 1, 0, 0);
  CHECK(clone.state_count() == 3);
  CHECK(equivalent(clone, m0()).equivalent);
  const auto h = h_method(m0(), 3);
  MachineMutant mu{"c", MutationOperator::extra_state, "clone", clone};
  const auto res = classify(m0(), h, mu, {});
  CHECK(res.result().kind == OutcomeKind::equivalent);
  CHECK_FALSE(res.result().first_failing_case);
}

TEST_CASE("sampling is deterministic, sorted and bounded") {
  std::mt19937_64 rng(4);
  const auto m = test::random_minimal_machine(rng, 5, 3, 3);
  MutationOptions opt;
  const auto total = candidate_count(m, opt);
  opt.limit = 50;
  const auto a = generate_mutants(m, opt);
  const auto b = generate_mutants(m, opt);
  REQUIRE(a.size() == 50);
  REQUIRE(total > 50);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].id == b[k].id);
    idx.push_back(std::stoul(a[k].id.substr(1)));
  }
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  CHECK(idx.back() < total);
  opt.seed = 2;
  const auto c = generate_mutants(m, opt);
  bool differs = false;
  for (std::size_t k = 0; k < c.size(); ++k) differs = differs || c[k].id != a[k].id;
  CHECK(differs);
}

TEST_CASE("M0 mutants against the H suite") {
  const auto h = h_method(m0(), 2);
  MutationOptions opt;
  opt.operators = {MutationOperator::output_fault, MutationOperator::transfer_fault};
  const auto outcomes = classify_all(m0(), h, generate_mutants(m0(), opt), {});
  const auto s = mutation_report(outcomes);
  CHECK(s.total == 8);
  CHECK(s.escaped == 0);
  CHECK(s.errors == 0);
  CHECK(s.false_failures == 0);
  for (const auto& o : outcomes)
    if (o.op == MutationOperator::output_fault) CHECK(o.result().kind == OutcomeKind::killed);
  CHECK(s.killed + s.equivalent == 8);
  REQUIRE(s.score);
  CHECK(*s.score == doctest::Approx(1.0));
}

TEST_CASE("random machines: zero escapes over the full enumeration") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    const auto m = test::random_minimal_machine(rng, n, 2, 2);
    for (int mb : {n, n + 1}) {
      MutationOptions opt;
      opt.operators = {MutationOperator::output_fault, MutationOperator::transfer_fault};
      if (mb > n) opt.operators.push_back(MutationOperator::extra_state);
      for (const auto& suite : {h_method(m, mb), w_method(m, mb)}) {
        const auto mutants = generate_mutants(m, opt);
        const auto outcomes = classify_all(m, suite, mutants, {ClassifyMode::oracle, 2});
        const auto s = mutation_report(outcomes);
        CHECK(s.escaped == 0);
        CHECK(s.false_failures == 0);
        // Equivalence certified by the brute-force oracle as well.
        for (std::size_t k = 0; k < mutants.size(); ++k)
          CHECK((outcomes[k].result().kind == OutcomeKind::equivalent) ==
                test::brute_equivalent(m, mutants[k].machine));
      }
    }
  }
}

TEST_CASE("a weakened suite lets a mutant escape") {
  const auto m = m0();
  auto h = h_method(m, 2);
  // Only <b>: output faults on (s1, *) cannot be seen.
  h.cases = {make_case(m, {"b"})};
  const auto outcomes = classify_all(m, h, generate_mutants(m, only(MutationOperator::output_fault)), {});
  const auto s = mutation_report(outcomes);
  CHECK(s.escaped > 0);
  REQUIRE(s.score);
  CHECK(*s.score < 1.0);
  const auto j = mutation_report_to_json(outcomes);
  bool listed = false;
  for (const auto& row : j["mutants"]) listed = listed || row["oracle"]["outcome"] == "ESCAPED";
  CHECK(listed);
}

TEST_CASE("empty outcome set has no score") {
  const auto s = mutation_report({});
  CHECK(s.total == 0);
  CHECK_FALSE(s.score);
  CHECK(mutation_report_to_json({})["summary"]["score"] == "n/a");
  CHECK(mutation_summary_text(s).find("n/a") != std::string::npos);
}

TEST_CASE("oracle and harness modes agree on machine mutants") {
  TempDir dir;
  const auto m = m0();
  const auto h = h_method(m, 3);
  MutationOptions opt;
  opt.operators = {MutationOperator::output_fault, MutationOperator::transfer_fault,
                   MutationOperator::extra_state};
  opt.limit = 20;
  const auto mutants = generate_mutants(m, opt);
  MachineSutFactory spawn = [&](const MachineMutant& mu) -> std::unique_ptr<SutAdapter> {
    const auto file = dir.path / (mu.id + ".fsm");
    write_document(file, machine_to_json(mu.machine));
    return std::make_unique<ProcessSut>(std::string("'") + SCT_SCTEST_PATH + "' serve-reference '" +
                                        file.string() + "'");
  };
  const auto outcomes = classify_all(m, h, mutants, {ClassifyMode::both, 2}, spawn);
  const auto s = mutation_report(outcomes);
  CHECK(s.disagreements == 0);
  CHECK(s.errors == 0);
  for (const auto& o : outcomes) {
    REQUIRE(o.oracle);
    REQUIRE(o.harness);
    CHECK(*o.oracle == *o.harness);
  }
}

TEST_CASE("program mutants are well-formed and differ at their locus") {
  const auto p = welding_program();
  MutationOptions opt;
  opt.operators = {MutationOperator::output_fault, MutationOperator::transfer_fault,
                   MutationOperator::guard_flip, MutationOperator::extra_state};
  opt.limit = 120;
  const auto mutants = generate_mutants(p, opt);
  REQUIRE(mutants.size() == 120);
  std::set<MutationOperator> ops;
  for (const auto& mu : mutants) {
    ops.insert(mu.op);
    CHECK(check_program(mu.program).ok());
    if (mu.op == MutationOperator::guard_flip) CHECK(mu.program.resolution == Resolution::first_match);
    if (mu.op == MutationOperator::extra_state)
      CHECK(mu.program.states.size() == p.states.size() + 1);
    else
      CHECK(mu.program.states.size() == p.states.size());
    if (mu.op == MutationOperator::output_fault || mu.op == MutationOperator::transfer_fault) {
      int diff = 0;
      for (std::size_t k = 0; k < p.actions.size(); ++k)
        diff += p.actions[k].output != mu.program.actions[k].output ||
                p.actions[k].target != mu.program.actions[k].target;
      CHECK(diff == 1);
    }
  }
  CHECK(ops.size() >= 3);
}

TEST_CASE("program mutants: oracle classification over a generated suite") {
  const auto p = welding_program();
  const auto r = program_as_sfsm(p);
  const auto a = abstract_to_fsm(r, IncompletePolicy::complete_with_selfloop);
  const auto cs = concretize_suite(h_method(a.fsm, a.fsm.state_count()), a.map);
  MutationOptions opt;
  opt.operators = {MutationOperator::output_fault, MutationOperator::transfer_fault,
                   MutationOperator::guard_flip};
  opt.limit = 40;
  const auto mutants = generate_mutants(p, opt);
  const auto outcomes = classify_all(p, cs, mutants, {ClassifyMode::oracle, 2});
  const auto s = mutation_report(outcomes);
  CHECK(s.total == 40);
  CHECK(s.escaped == 0);
  CHECK(s.errors == 0);
  CHECK(s.false_failures == 0);
  for (std::size_t k = 0; k < mutants.size(); ++k)
    CHECK((outcomes[k].result().kind == OutcomeKind::equivalent) ==
          equivalent(program_as_machine(p), program_as_machine(mutants[k].program)).equivalent);
  CHECK(mutation_report_csv(outcomes).find("id,") == 0);
}

TEST_CASE("operator names") {
  CHECK(operator_from_string("output") == MutationOperator::output_fault);
  CHECK(operator_from_string("transfer-fault") == MutationOperator::transfer_fault);
  CHECK(operator_from_string("extra") == MutationOperator::extra_state);
  CHECK(operator_from_string("guard-literal-flip") == MutationOperator::guard_flip);
  CHECK(std::string(to_string(MutationOperator::guard_flip)) == "guard-literal-flip");
  CHECK_THROWS(operator_from_string("bogus"));
  CHECK(classify_mode_from_string("both") == ClassifyMode::both);
}
