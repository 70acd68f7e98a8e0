#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sct/codec.hpp"
#include "sct/supervisor.hpp"
#include "sct/testgen.hpp"
#include "support.hpp"

using namespace sct;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("sct-cli-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int status = -1;
  std::string out;
};

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

/// Runs sctest with `args` inside `dir`; stdout and stderr are captured together.
Result sctest(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const auto log = dir / "last.log";
  const std::string cmd = "cd " + q(dir) + " && " + env + " '" + SCT_SCTEST_PATH + "' " + args +
                          " > " + q(log) + " 2>&1";
  const int raw = std::system(cmd.c_str());
  Result r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

const fs::path kCell = fs::path(SCT_SOURCE_DIR) / "models/welding-cell.cb";

}  // namespace

TEST_CASE("generate rejects a state bound below the machine size") {
  TempDir dir("bound");
  write_document(dir.path / "m0.fsm", machine_to_json(test::m0()));
  auto r = sctest(dir.path, "generate m0.fsm --m 1");
  CHECK(r.status != 0);
  CHECK(r.out.find("mBound") != std::string::npos);
  r = sctest(dir.path, "generate m0.fsm --m 2 -o s.json");
  CHECK(r.status == 0);
  CHECK(suite_from_json(read_document(dir.path / "s.json")) == h_method(test::m0(), 2));
  CHECK(sctest(dir.path, "generate m0.fsm --method x").status != 0);
}

TEST_CASE("stage by stage on the welding cell") {
  TempDir dir("stages");
  const auto& d = dir.path;
  auto r = sctest(d, "translate " + q(kCell));
  INFO(r.out);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("hypotheses PASS") != std::string::npos);
  for (const char* f : {"welding-cell.gap", "welding-cell.sfsm", "welding-cell.hypotheses.json"})
    CHECK(fs::exists(d / f));

  REQUIRE(sctest(d, "classes welding-cell.sfsm -o cell.classes.json").status == 0);
  CHECK(read_document(d / "cell.classes.json")["kind"] == "partition");
  REQUIRE(sctest(d, "abstract welding-cell.sfsm").status == 0);
  REQUIRE(fs::exists(d / "welding-cell.fsm"));
  REQUIRE(fs::exists(d / "welding-cell.abstraction.json"));

  REQUIRE(sctest(d, "generate welding-cell.fsm -o h.json").status == 0);
  REQUIRE(sctest(d, "generate welding-cell.fsm --method w -o w.json").status == 0);
  CHECK(suite_stats(suite_from_json(read_document(d / "h.json"))).total_symbols <
        suite_stats(suite_from_json(read_document(d / "w.json"))).total_symbols);
  CHECK(sctest(d, "check-suite welding-cell.fsm h.json").status == 0);
  CHECK(sctest(d, "check-suite welding-cell.fsm w.json").status == 0);

  // A suite missing half its cases is flagged.
  auto half = read_document(d / "h.json");
  auto& cases = half["cases"];
  cases.erase(cases.begin() + static_cast<long>(cases.size() / 2), cases.end());
  write_document(d / "half.json", half);
  r = sctest(d, "check-suite welding-cell.fsm half.json");
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);

  REQUIRE(sctest(d, "concretize h.json welding-cell.abstraction.json -o c.json").status == 0);
  REQUIRE(sctest(d, "concretize h.json cell.classes.json --map welding-cell.abstraction.json -o c2.json")
              .status == 0);
  CHECK(read_document(d / "c.json")["cases"] == read_document(d / "c2.json")["cases"]);
  CHECK(sctest(d, "concretize h.json cell.classes.json").status != 0);

  r = sctest(d, "run c.json --sut \"{self} serve-reference welding-cell.gap\" -o rep.json");
  CHECK(r.status == 0);
  CHECK(r.out.find("complete pass") != std::string::npos);
  CHECK(read_document(d / "rep.json")["summary"]["completePass"] == true);

  // Output-fault mutant served as the SUT.
  auto p = program_from_json(read_document(d / "welding-cell.gap"));
  auto& a = p.actions.front();
  a.output["alarm"] = std::int64_t{1} - std::get<std::int64_t>(a.output.at("alarm"));
  write_document(d / "bad.gap", program_to_json(p));
  r = sctest(d, "run c.json --sut \"{self} serve-reference bad.gap\" -o bad.json");
  CHECK(r.status == 1);
  const auto bad = read_document(d / "bad.json");
  CHECK(bad["summary"]["fail"].get<int>() > 0);
  bool listed = false;
  for (const auto& v : bad["verdicts"]) listed = listed || v["verdict"] == "FAIL";
  CHECK(listed);

  r = sctest(d, "mutate welding-cell.fsm --suite h.json --limit 30 -o mut.json --csv mut.csv");
  CHECK(r.status == 0);
  CHECK(read_document(d / "mut.json")["summary"]["escaped"] == 0);
  CHECK(fs::exists(d / "mut.csv"));
  // One extra state is inside the fault model of an mBound n+1 suite.
  REQUIRE(sctest(d, "generate welding-cell.fsm --m 28 -o h28.json").status == 0);
  r = sctest(d, "mutate welding-cell.fsm --suite h28.json --ops extra-state --limit 20 -o mut28.json");
  CHECK(r.status == 0);
  CHECK(read_document(d / "mut28.json")["summary"]["escaped"] == 0);
  CHECK(sctest(d, "mutate welding-cell.fsm --suite w.json --ops nothing").status != 0);
}

TEST_CASE("artefacts with mismatched fingerprints are refused") {
  TempDir dir("fingerprint");
  const auto& d = dir.path;
  write_document(d / "m0.fsm", machine_to_json(test::m0()));
  write_document(d / "one.fsm", machine_to_json(test::single_state()));
  REQUIRE(sctest(d, "generate m0.fsm -o s.json").status == 0);
  auto r = sctest(d, "mutate one.fsm --suite s.json");
  CHECK(r.status == 2);
  CHECK(r.out.find("fingerprint") != std::string::npos);

  REQUIRE(sctest(d, "translate " + q(kCell)).status == 0);
  REQUIRE(sctest(d, "abstract welding-cell.sfsm").status == 0);
  r = sctest(d, "concretize s.json welding-cell.abstraction.json");
  CHECK(r.status == 2);
  CHECK(r.out.find("fingerprint") != std::string::npos);
}

TEST_CASE("configuration file and environment default") {
  TempDir dir("config");
  const auto& d = dir.path;
  write_document(d / "m0.fsm", machine_to_json(test::m0()));
  write_document(d / "bad.json", Json{{"mBound", 1}});
  write_document(d / "good.json", Json{{"mBound", 3}, {"seed", 5}});
  write_document(d / "typo.json", Json{{"mbound", 3}});
  write_document(d / "zero.json", Json{{"timeoutMs", 0}});
  CHECK(sctest(d, "generate m0.fsm --config bad.json").status != 0);
  CHECK(sctest(d, "generate m0.fsm --config good.json -o s.json").status == 0);
  CHECK(read_document(d / "s.json")["mBound"] == 3);
  CHECK(sctest(d, "generate m0.fsm", "SCTEST_CONFIG=bad.json").status != 0);
  // Flags override the config file.
  CHECK(sctest(d, "generate m0.fsm --m 2", "SCTEST_CONFIG=bad.json").status == 0);
  auto r = sctest(d, "generate m0.fsm --config typo.json");
  CHECK(r.status == 2);
  CHECK(r.out.find("unknown config key") != std::string::npos);
  CHECK(sctest(d, "generate m0.fsm --config zero.json").status == 2);
  CHECK(sctest(d, "generate m0.fsm --policy sometimes").status == 2);
}

TEST_CASE("render and serve-reference") {
  TempDir dir("render");
  const auto& d = dir.path;
  write_document(d / "m0.fsm", machine_to_json(test::m0()));
  auto r = sctest(d, "render m0.fsm");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("digraph", 0) == 0);
  REQUIRE(sctest(d, "translate " + q(kCell)).status == 0);
  REQUIRE(sctest(d, "render welding-cell.sfsm -o cell.dot").status == 0);
  std::ifstream golden(fs::path(SCT_GOLDEN_DIR) / "welding-cell.dot");
  std::ifstream made(d / "cell.dot");
  std::stringstream a, b;
  a << golden.rdbuf();
  b << made.rdbuf();
  CHECK(a.str() == b.str());
  CHECK(sctest(d, "render welding-cell.hypotheses.json").status == 2);

  std::ofstream(d / "in.txt") << "RESET\nIN {\"input\":\"a\"}\nIN {\"input\":\"a\"}\n";
  r = sctest(d, "serve-reference m0.fsm < in.txt");
  CHECK(r.status == 0);
  CHECK(r.out == "READY\nOUT {\"output\":\"1\"}\nOUT {\"output\":\"0\"}\n");
}

TEST_CASE("pipeline: self-conformance reaches a complete pass") {
  TempDir dir("pipeline");
  const auto r = sctest(dir.path, "pipeline " + q(kCell) +
                                      " --sut \"{self} serve-reference {program}\" --mutants 25 -o out");
  INFO(r.out);
  CHECK(r.status == 0);
  CHECK(r.out.find("pipeline: PASS") != std::string::npos);
  const auto out = dir.path / "out";
  CHECK(read_document(out / "welding-cell.report.json")["summary"]["completePass"] == true);
  CHECK(read_document(out / "welding-cell.completeness.json")["pass"] == true);
  const auto mut = read_document(out / "welding-cell.mutation.json");
  CHECK(mut["summary"]["total"] == 25);
  CHECK(mut["summary"]["escaped"] == 0);
  CHECK(mut["summary"]["disagreements"] == 0);

  // A faulty SUT fails the pipeline.
  auto p = program_from_json(read_document(out / "welding-cell.gap"));
  auto& last = p.actions.back();
  last.output["alarm"] = std::int64_t{1} - std::get<std::int64_t>(last.output.at("alarm"));
  write_document(dir.path / "bad.gap", program_to_json(p));
  const auto bad = sctest(dir.path, "pipeline " + q(kCell) +
                                        " --sut \"{self} serve-reference bad.gap\" --mutants 5 -o out2");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("pipeline: FAIL") != std::string::npos);
}
