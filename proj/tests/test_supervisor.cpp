#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "sct/codec.hpp"
#include "sct/error.hpp"
#include "sct/supervisor.hpp"
#include "support.hpp"

using namespace sct;

namespace {

const std::vector<std::string> kFactors{"HS", "HC", "HRW"};

RiskState rs(std::initializer_list<Phase> ps) { return RiskState{ps}; }
constexpr Phase O = Phase::inactive, A = Phase::active, M = Phase::mitigated;

/// Single factor F, one monitored x:[0,3], one controlled y:[0,1].
Json behaviour_doc(const Json& transitions) {
  return Json{{"vars",
               Json::array({Json{{"name", "x"}, {"kind", "monitored"}, {"sort", {{"range", {0, 3}}}}},
                            Json{{"name", "y"}, {"kind", "controlled"}, {"sort", {{"range", {0, 1}}}}},
                            Json{{"name", "F"}, {"kind", "factor"}, {"sort", "phase"}}})},
              {"initial", {{"F", "0"}}},
              {"transitions", transitions}};
}

Json tr(const char* from, const char* guard, int y, const char* to) {
  return Json{{"source", {{"F", from}}}, {"guard", guard}, {"output", {{"y", y}}}, {"target", {{"F", to}}}};
}

ControllerBehavior single_transition() {
  return behavior_from_json(behaviour_doc(Json::array({tr("0", "x > 1", 1, "a")})));
}

ControllerBehavior welding() {
  return load_behavior(std::filesystem::path(SCT_SOURCE_DIR) / "models/welding-cell.cb");
}

Valuation xv(std::int64_t x) { return {{"x", x}}; }

}  // namespace

TEST_CASE("phase life-cycle") {
  CHECK(lifecycle_allows(O, A));
  CHECK(lifecycle_allows(A, M));
  CHECK(lifecycle_allows(M, O));
  for (auto p : {O, A, M}) CHECK(lifecycle_allows(p, p));
  CHECK_FALSE(lifecycle_allows(O, M));
  CHECK_FALSE(lifecycle_allows(A, O));
  CHECK_FALSE(lifecycle_allows(M, A));
  CHECK(phase_from_literal("a") == A);
  CHECK(std::string(phase_literal(M)) == "m");
  CHECK_THROWS(phase_from_literal("x"));
  CHECK(risk_state_name(kFactors, rs({O, A, M})) == "HS0_HCa_HRWm");
}

TEST_CASE("derive_action_name") {
  CHECK(derive_action_name(kFactors, rs({O, O, O}), rs({A, O, O})) == "HSa");
  CHECK(derive_action_name(kFactors, rs({A, O, M}), rs({A, O, M})) == "nop");
  CHECK(derive_action_name(kFactors, rs({A, O, A}), rs({M, O, M})) == "HSm_HRWm");
  CHECK_THROWS_AS(derive_action_name(kFactors, rs({O, O, O}), rs({M, O, O})), LifecycleViolation);
}

TEST_CASE("derive_action_name is injective on distinct pairs with a common source") {
  std::vector<RiskState> all;
  for (auto a : {O, A, M})
    for (auto b : {O, A, M})
      for (auto c : {O, A, M}) all.push_back(rs({a, b, c}));
  for (const auto& from : all) {
    std::set<std::string> names;
    std::size_t legal = 0;
    for (const auto& to : all) {
      bool ok = true;
      for (std::size_t k = 0; k < 3; ++k) ok = ok && lifecycle_allows(from.phases[k], to.phases[k]);
      if (!ok) {
        CHECK_THROWS_AS(derive_action_name(kFactors, from, to), LifecycleViolation);
        continue;
      }
      ++legal;
      names.insert(derive_action_name(kFactors, from, to));
    }
    CHECK(names.size() == legal);
  }
}

TEST_CASE("load_behavior") {
  auto b = welding();
  CHECK(b.factors == kFactors);
  CHECK(b.transitions.size() == 125);
  CHECK(b.warnings.empty());

  auto doc = behaviour_doc(Json::array());
  auto empty = behavior_from_json(doc);
  CHECK(empty.warnings == std::vector<std::string>{"no transitions"});

  auto clash = behaviour_doc(Json::array());
  clash["vars"].push_back(Json{{"name", "x"}, {"kind", "factor"}, {"sort", "phase"}});
  CHECK_THROWS_AS(behavior_from_json(clash), DisjointnessViolation);

  auto undeclared = behaviour_doc(Json::array({tr("0", "z > 1", 1, "a")}));
  CHECK_THROWS_AS(behavior_from_json(undeclared), UndeclaredVariable);

  auto bad_guard = behaviour_doc(Json::array({tr("0", "x >", 1, "a")}));
  CHECK_THROWS_AS(behavior_from_json(bad_guard), GuardSyntaxError);
}

TEST_CASE("to_guarded_actions") {
  auto p = to_guarded_actions(single_transition());
  REQUIRE(p.actions.size() == 1);
  CHECK(p.actions[0].name == "Fa");
  CHECK(print_guard(p.actions[0].guard) == "(x > 1)");
  CHECK(p.actions[0].output == Valuation{{"y", std::int64_t{1}}});
  CHECK(p.actions[0].source == "F0");
  CHECK(p.actions[0].target == "Fa");

  auto overlapping = behavior_from_json(
      behaviour_doc(Json::array({tr("0", "x > 0", 1, "a"), tr("0", "x > 1", 0, "0")})));
  try {
    to_guarded_actions(overlapping);
    FAIL("expected a determinism violation");
  } catch (const DeterminismViolation& e) {
    CHECK(e.witness() == R"({"x":2})");
  }

  auto skip = behavior_from_json(behaviour_doc(Json::array({tr("0", "x > 1", 1, "m")})));
  CHECK_THROWS_AS(to_guarded_actions(skip), LifecycleViolation);

  auto w = to_guarded_actions(welding());
  CHECK(w.actions.size() == 125);
  CHECK(w.states.size() == 27);
  CHECK(check_program(w).ok());
}

TEST_CASE("interpret_step") {
  auto p = to_guarded_actions(single_transition());
  auto r = interpret_step(p, xv(2), "F0");
  CHECK(r.output == Valuation{{"y", std::int64_t{1}}});
  CHECK(r.target == "Fa");
  CHECK_THROWS_AS(interpret_step(p, xv(0), "F0"), IncompletenessError);

  auto q = to_guarded_actions(single_transition(), IncompletePolicy::complete_with_selfloop);
  auto nil = interpret_step(q, xv(0), "F0");
  CHECK(nil.output.empty());
  CHECK(nil.target == "F0");

  // Defensive multiple-enabled check on a hand-built program.
  auto both = p;
  both.actions.push_back(both.actions[0]);
  both.actions[1].name = "dup";
  CHECK_THROWS_AS(interpret_step(both, xv(3), "F0"), DeterminismViolation);
  both.resolution = Resolution::first_match;
  CHECK(interpret_step(both, xv(3), "F0").target == "Fa");

  Interpreter in(p);
  CHECK(in.current() == "F0");
  CHECK(in.step(xv(3)) == Valuation{{"y", std::int64_t{1}}});
  CHECK(in.current() == "Fa");
  in.reset();
  CHECK(in.current() == "F0");
}

TEST_CASE("welding cell: first class representative from the initial state") {
  const auto b = welding();
  const auto p = to_guarded_actions(b);
  const auto r = to_test_reference(b);
  const auto classes = input_classes(r);
  const auto& rep = classes.classes.front().representative;
  const auto step = interpret_step(p, rep, p.initial);
  const auto en = test::enabled(r, r.initial, rep);
  REQUIRE(en.size() == 1);
  CHECK(step.target == en[0]->to);
  CHECK(step.output == en[0]->output);
}

TEST_CASE("to_test_reference") {
  auto r = to_test_reference(single_transition());
  CHECK(r.states.size() == 2);
  CHECK(r.initial == "F0");

  auto loop = behavior_from_json(behaviour_doc(Json::array(
      {tr("0", "x > 1", 1, "0"), tr("0", "x <= 1", 0, "0"), tr("a", "true", 1, "m")})));
  std::vector<std::string> warnings;
  auto reach = reachable_risk_states(loop, &warnings);
  CHECK(reach.size() == 1);
  CHECK(warnings.size() == 2);
  auto one = to_test_reference(loop);
  CHECK(one.states == std::vector<std::string>{"F0"});
  CHECK(one.transitions.size() == 2);

  auto w = to_test_reference(welding());
  CHECK(w.states.size() <= 27);
  CHECK(w.states.size() >= 4);
}

TEST_CASE("check_hypotheses") {
  const auto b = welding();
  const auto p = to_guarded_actions(b);
  const auto r = to_test_reference(b);
  auto ok = check_hypotheses(p, r);
  CHECK(ok.pass());
  CHECK(ok.reference_states == 27);
  CHECK(ok.program_states == 27);

  auto single = single_transition();
  CHECK(check_hypotheses(to_guarded_actions(single), to_test_reference(single)).pass());

  auto stronger = to_guarded_actions(single);
  stronger.actions[0].guard = parse_guard("x > 2", stronger.inputs);
  auto rep = check_hypotheses(stronger, to_test_reference(single));
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.diffs.empty());
  bool names_guard = false;
  for (const auto& d : rep.diffs) names_guard = names_guard || d.find("(x > 2)") != std::string::npos;
  CHECK(names_guard);

  auto extra = to_guarded_actions(single);
  extra.states.push_back({"Fm", rs({M})});
  auto rep2 = check_hypotheses(extra, to_test_reference(single));
  CHECK_FALSE(rep2.pass());
  CHECK(rep2.program_states == 3);
  CHECK(rep2.reference_states == 2);
}

TEST_CASE("program documents round-trip") {
  const auto p = to_guarded_actions(welding());
  const auto j = program_to_json(p);
  const auto back = program_from_json(j);
  CHECK(document_text(program_to_json(back)) == document_text(j));
  CHECK(equivalent(program_as_machine(p), program_as_machine(back)).equivalent);
}

TEST_CASE("welding cell: semantic agreement between program and reference") {
  const auto b = welding();
  const auto p = to_guarded_actions(b);
  const auto r = to_test_reference(b);
  const auto classes = input_classes(r);
  for (const auto& s : p.states) {
    for (const auto& c : classes.classes) {
      const auto step = interpret_step(p, c.representative, s.id);
      const auto en = test::enabled(r, s.id, c.representative);
      REQUIRE(en.size() == 1);
      CHECK(step.target == en[0]->to);
      CHECK(step.output == en[0]->output);
    }
  }
}

TEST_CASE("welding cell: random runs respect the factor life-cycle") {
  const auto p = to_guarded_actions(welding());
  const auto inputs = enumerate_valuations(p.inputs);
  std::mt19937_64 rng(3);
  Interpreter in(p);
  for (int trial = 0; trial < 200; ++trial) {
    in.reset();
    RiskState cur = p.state(in.current())->risk;
    for (int k = 0; k < 30; ++k) {
      in.step(inputs[rng() % inputs.size()]);
      const RiskState next = p.state(in.current())->risk;
      for (std::size_t f = 0; f < next.phases.size(); ++f)
        CHECK(lifecycle_allows(cur.phases[f], next.phases[f]));
      cur = next;
    }
  }
}

TEST_CASE("program_as_machine agrees with the interpreter") {
  const auto p = to_guarded_actions(welding());
  const auto m = program_as_machine(p);
  CHECK(m.state_count() == 27);
  CHECK(static_cast<std::uint64_t>(m.input_count()) == valuation_count(p.inputs));
  const auto inputs = enumerate_valuations(p.inputs);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Interpreter in(p);
    Word w;
    std::vector<Valuation> vs;
    for (int k = 0; k < 20; ++k) {
      vs.push_back(inputs[rng() % inputs.size()]);
      w.push_back(canonical_text(vs.back()));
    }
    const auto out = run(m, w).outputs;
    for (std::size_t k = 0; k < vs.size(); ++k) CHECK(canonical_text(in.step(vs[k])) == out[k]);
  }
}
