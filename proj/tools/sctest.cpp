// sctest: command-line driver for the supervisor conformance-testing
// workflow. Every subcommand is one stage; `pipeline` chains all stages
// through files in one artefact directory.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sct/codec.hpp"
#include "sct/error.hpp"
#include "sct/harness.hpp"
#include "sct/mutation.hpp"
#include "sct/sfsm.hpp"
#include "sct/supervisor.hpp"
#include "sct/testgen.hpp"

namespace fs = std::filesystem;
using namespace sct;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

constexpr std::size_t kPipelineMutants = 200;

struct Config {
  std::uint64_t bound = kDefaultEnumerationBound;
  IncompletePolicy policy = IncompletePolicy::error;
  std::optional<int> m_bound;
  int timeout_ms = static_cast<int>(kDefaultStepTimeout.count());
  std::size_t mutation_limit = kDefaultMutantLimit;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  fs::path out_dir = ".";
};

/// Keys mirror the command-line flags.
Config load_config(const fs::path& path) {
  Config c;
  const auto j = read_document(path);
  if (!j.is_object()) throw FormatError(path.string() + ": config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "bound") c.bound = value.get<std::uint64_t>();
    else if (key == "policy") c.policy = policy_from_string(value.get<std::string>());
    else if (key == "mBound") c.m_bound = value.get<int>();
    else if (key == "timeoutMs") c.timeout_ms = value.get<int>();
    else if (key == "mutationLimit") c.mutation_limit = value.get<std::size_t>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "jobs") c.jobs = value.get<unsigned>();
    else if (key == "outDir") c.out_dir = value.get<std::string>();
    else throw FormatError(path.string() + ": unknown config key '" + key + "'");
  }
  return c;
}

void check_config(const Config& c) {
  if (c.bound == 0) throw PreconditionError("enumeration bound must be positive");
  if (c.m_bound && *c.m_bound <= 0) throw PreconditionError("mBound must be positive");
  if (c.timeout_ms <= 0) throw PreconditionError("step timeout must be positive");
  if (c.jobs == 0) throw PreconditionError("jobs must be positive");
}

std::string self_path() {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  return ec ? std::string("sctest") : p.string();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string expand_command(std::string cmd, const std::optional<fs::path>& program) {
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size()))
      cmd.replace(pos, key.size(), value);
  };
  replace("{self}", shell_quote(self_path()));
  if (program) replace("{program}", shell_quote(program->string()));
  return cmd;
}

/// Persists a document tagged with the fingerprints of its inputs.
Json tagged(Json doc, const Json& derived_from) {
  doc["derivedFrom"] = derived_from;
  return doc;
}

void emit(const std::optional<fs::path>& out, const Json& doc) {
  if (out) write_document(*out, doc);
  else std::cout << document_text(doc);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  os << text;
}

void require_fingerprint(const std::string& expected, const std::string& actual,
                         const std::string& what) {
  if (expected != actual)
    throw PreconditionError("fingerprint mismatch: " + what + " (expected " + expected +
                            ", found " + actual + ")");
}

std::string derived(const Json& doc, const char* role) {
  if (doc.contains("derivedFrom") && doc["derivedFrom"].contains(role))
    return doc["derivedFrom"][role].get<std::string>();
  return {};
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

// ---------------------------------------------------------------------------
// Stages

struct TranslateResult {
  fs::path program, sfsm, hypotheses;
  bool hypotheses_pass = false;
};

TranslateResult stage_translate(const fs::path& cb, const fs::path& dir, const std::string& stem,
                                const Config& cfg) {
  const auto doc = read_document(cb);
  const auto fp = fingerprint(doc);
  const auto b = behavior_from_json(doc);
  for (const auto& w : b.warnings) std::cerr << "warning: " << w << "\n";
  auto program = to_guarded_actions(b, cfg.policy, cfg.bound);
  auto ref = to_test_reference(b, cfg.bound);
  TranslateResult r{dir / (stem + ".gap"), dir / (stem + ".sfsm"), dir / (stem + ".hypotheses.json")};
  write_document(r.program, tagged(program_to_json(program), {{"behaviour", fp}}));
  write_document(r.sfsm, tagged(sfsm_to_json(ref), {{"behaviour", fp}}));
  const auto hyp = check_hypotheses(program, ref);
  write_document(r.hypotheses, Json{{"kind", "hypotheses"},
                                    {"derivedFrom", {{"behaviour", fp}}},
                                    {"referenceStates", hyp.reference_states},
                                    {"programStates", hyp.program_states},
                                    {"diffs", hyp.diffs},
                                    {"pass", hyp.pass()}});
  r.hypotheses_pass = hyp.pass();
  std::cout << "translate: " << program.actions.size() << " guarded actions, "
            << ref.states.size() << " control states; hypotheses "
            << (hyp.pass() ? "PASS" : "FAIL") << "\n";
  for (const auto& d : hyp.diffs) std::cout << "  " << d << "\n";
  return r;
}

Json partition_document(const fs::path& sfsm_path, const Config& cfg) {
  const auto doc = read_document(sfsm_path);
  const auto part = input_classes(sfsm_from_json(doc), cfg.bound);
  return tagged(partition_to_json(part), {{"sfsm", fingerprint(doc)}});
}

struct AbstractResult {
  fs::path fsm, map;
};

AbstractResult stage_abstract(const fs::path& sfsm_path, const fs::path& dir,
                              const std::string& stem, const Config& cfg) {
  const auto doc = read_document(sfsm_path);
  const auto fp = fingerprint(doc);
  const auto abs = abstract_to_fsm(sfsm_from_json(doc), cfg.policy, cfg.bound);
  AbstractResult r{dir / (stem + ".fsm"), dir / (stem + ".abstraction.json")};
  write_document(r.fsm, tagged(machine_to_json(abs.fsm), {{"sfsm", fp}}));
  write_document(r.map, tagged(abstraction_map_to_json(abs.map),
                               {{"sfsm", fp}, {"fsm", machine_fingerprint(abs.fsm)}}));
  std::cout << "abstract: " << abs.fsm.state_count() << " states, "
            << abs.fsm.input_count() << " input classes, " << abs.fsm.output_count()
            << " output labels\n";
  return r;
}

Json generate_document(const fs::path& fsm_path, const std::string& method,
                       std::optional<int> m_bound) {
  const auto m = machine_from_json(read_document(fsm_path));
  const int k = m_bound.value_or(m.state_count());
  TestSuite ts;
  if (method == "h" || method == "H") ts = h_method(m, k);
  else if (method == "w" || method == "W") ts = w_method(m, k);
  else throw FormatError("unknown method '" + method + "' (expected h or w)");
  const auto s = suite_stats(ts);
  std::cerr << "generate: " << ts.method << "-suite, mBound " << k << ", " << s.cases
            << " cases, " << s.total_symbols << " input symbols, longest " << s.max_length
            << "\n";
  return suite_to_json(ts);
}

Json concretize_document(const fs::path& suite_path, const fs::path& classes_path,
                         const std::optional<fs::path>& map_path) {
  const auto suite_doc = read_document(suite_path);
  const auto suite = suite_from_json(suite_doc);
  auto classes_doc = read_document(classes_path);
  AbstractionMap map;
  Json map_doc;
  if (document_kind(classes_doc) == "abstraction") {
    map_doc = classes_doc;
  } else if (document_kind(classes_doc) == "partition") {
    if (!map_path) throw FormatError("a partition alone has no output labels; pass --map");
    map_doc = read_document(*map_path);
    const auto part = partition_from_json(classes_doc);
    const auto full = abstraction_map_from_json(map_doc);
    for (const auto& c : part.classes) {
      auto it = full.class_representative.find(c.id);
      if (it == full.class_representative.end()) continue;
      if (!part.find(c.id) || part.find(c.id)->representative != it->second)
        throw PreconditionError("partition and abstraction map disagree on class " + c.id);
    }
    if (derived(classes_doc, "sfsm") != derived(map_doc, "sfsm"))
      throw PreconditionError("fingerprint mismatch: partition and abstraction map come from "
                              "different SFSMs");
  } else {
    throw FormatError(classes_path.string() + ": expected a partition or abstraction document");
  }
  map = abstraction_map_from_json(map_doc);
  const auto fsm_fp = derived(map_doc, "fsm");
  if (!fsm_fp.empty())
    require_fingerprint(fsm_fp, suite.reference_fingerprint,
                        "suite was not generated from the abstracted FSM");
  const auto concrete = concretize_suite(suite, map);
  return tagged(suite_to_json(concrete),
                {{"suite", fingerprint(suite_doc)}, {"abstraction", fingerprint(map_doc)}});
}

int stage_check_suite(const fs::path& fsm_path, const fs::path& suite_path,
                      std::optional<int> m_bound, const std::optional<fs::path>& out) {
  const auto m = machine_from_json(read_document(fsm_path));
  const auto suite_doc = read_document(suite_path);
  const auto ts = suite_from_json(suite_doc);
  const int k = m_bound.value_or(ts.m_bound);
  const auto rep = check_h_completeness(m, k, ts);
  Json doc{{"kind", "completeness"},
           {"derivedFrom", {{"fsm", machine_fingerprint(m)}, {"suite", fingerprint(suite_doc)}}},
           {"mBound", k},
           {"violations", rep.violations},
           {"pass", rep.pass()}};
  if (out) write_document(*out, doc);
  std::cout << "check-suite: " << (rep.pass() ? "PASS" : "FAIL") << " (" << ts.method
            << "-suite, mBound " << k << ", " << ts.cases.size() << " cases)\n";
  std::size_t shown = 0;
  for (const auto& v : rep.violations) {
    if (shown++ == 20) {
      std::cout << "  ... " << rep.violations.size() - 20 << " more\n";
      break;
    }
    std::cout << "  " << v << "\n";
  }
  return rep.pass() ? kExitPass : kExitFail;
}

int stage_run(const std::string& sut_cmd, const fs::path& suite_path,
              const std::optional<fs::path>& program, const std::optional<fs::path>& out,
              const Config& cfg) {
  const auto doc = read_document(suite_path);
  ConcreteSuite ts;
  if (is_concrete_suite(doc)) ts = concrete_suite_from_json(doc);
  else ts = symbolic_suite(suite_from_json(doc));
  ProcessSut sut(expand_command(sut_cmd, program), std::chrono::milliseconds(cfg.timeout_ms));
  const auto rep = run_suite(sut, ts);
  auto j = report_to_json(rep);
  j["derivedFrom"] = {{"suite", fingerprint(doc)}};
  if (out) write_document(*out, j);
  std::cout << "run:\n" << report_summary(rep);
  return rep.complete_pass() ? kExitPass : kExitFail;
}

/// Harness-mode SUTs: each mutant is written next to the report and
/// served by a child `serve-reference`.
fs::path mutant_dir(const std::optional<fs::path>& out) {
  fs::path base = out ? out->parent_path() : fs::temp_directory_path();
  auto dir = base / (".mutants-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

bool mutation_clean(const MutationSummary& s) {
  return s.escaped == 0 && s.errors == 0 && s.false_failures == 0 && s.disagreements == 0;
}

/// Default operators stay inside the fault model: extra states only when
/// the suite was built for more states than the reference has.
std::vector<MutationOperator> default_ops(bool program, int suite_bound, std::size_t states) {
  std::vector<MutationOperator> ops{MutationOperator::output_fault, MutationOperator::transfer_fault};
  if (program) ops.push_back(MutationOperator::guard_flip);
  if (suite_bound > static_cast<int>(states)) ops.push_back(MutationOperator::extra_state);
  return ops;
}

int stage_mutate(const fs::path& target_path, const fs::path& suite_path,
                 std::vector<MutationOperator> ops, ClassifyMode mode,
                 std::size_t limit, const std::optional<fs::path>& out,
                 const std::optional<fs::path>& csv, const Config& cfg) {
  const auto target_doc = read_document(target_path);
  const auto suite_doc = read_document(suite_path);
  MutationOptions mopt{ops, limit, cfg.seed};
  ClassifyOptions copt{mode, cfg.jobs, cfg.bound};
  const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
  std::vector<MutationOutcome> outcomes;
  std::optional<fs::path> scratch;
  if (mode != ClassifyMode::oracle) scratch = mutant_dir(out);
  const std::string self = shell_quote(self_path());

  const auto kind = document_kind(target_doc);
  if (kind == "fsm") {
    const auto m = machine_from_json(target_doc);
    const auto ts = suite_from_json(suite_doc);
    require_fingerprint(machine_fingerprint(m), ts.reference_fingerprint,
                        "suite was not generated from this machine");
    if (ops.empty()) ops = default_ops(false, ts.m_bound, static_cast<std::size_t>(m.state_count()));
    mopt.operators = ops;
    const auto mutants = generate_mutants(m, mopt);
    MachineSutFactory factory = [&](const MachineMutant& mu) -> std::unique_ptr<SutAdapter> {
      auto file = *scratch / (mu.id + ".fsm");
      write_document(file, machine_to_json(mu.machine));
      return std::make_unique<ProcessSut>(self + " serve-reference " + shell_quote(file.string()),
                                          timeout);
    };
    outcomes = classify_all(m, ts, mutants, copt, scratch ? factory : MachineSutFactory{});
  } else if (kind == "program") {
    const auto p = program_from_json(target_doc);
    if (!is_concrete_suite(suite_doc))
      throw FormatError("program mutants need a concrete suite");
    const auto ts = concrete_suite_from_json(suite_doc);
    if (ops.empty()) ops = default_ops(true, ts.m_bound, p.states.size());
    mopt.operators = ops;
    const auto mutants = generate_mutants(p, mopt, cfg.bound);
    ProgramSutFactory factory = [&](const ProgramMutant& mu) -> std::unique_ptr<SutAdapter> {
      auto file = *scratch / (mu.id + ".gap");
      write_document(file, program_to_json(mu.program));
      return std::make_unique<ProcessSut>(self + " serve-reference " + shell_quote(file.string()),
                                          timeout);
    };
    outcomes = classify_all(p, ts, mutants, copt, scratch ? factory : ProgramSutFactory{});
  } else {
    throw FormatError(target_path.string() + ": expected an fsm or program document");
  }
  if (scratch) fs::remove_all(*scratch);

  auto doc = mutation_report_to_json(outcomes);
  Json ops_json = Json::array();
  for (auto op : ops) ops_json.push_back(to_string(op));
  doc["derivedFrom"] = {{"target", fingerprint(target_doc)}, {"suite", fingerprint(suite_doc)}};
  doc["options"] = {{"operators", ops_json}, {"limit", limit}, {"seed", cfg.seed},
                    {"mode", mode == ClassifyMode::oracle    ? "oracle"
                             : mode == ClassifyMode::harness ? "harness"
                                                             : "both"}};
  if (out) write_document(*out, doc);
  if (csv) write_text(*csv, mutation_report_csv(outcomes));
  const auto s = mutation_report(outcomes);
  std::cout << "mutate:\n" << mutation_summary_text(s);
  for (const auto& o : outcomes)
    if (o.result().kind == OutcomeKind::escaped || o.result().kind == OutcomeKind::error ||
        !o.modes_agree())
      std::cout << "  " << o.id << " " << to_string(o.result().kind) << ": " << o.locus << "\n";
  return mutation_clean(s) ? kExitPass : kExitFail;
}

std::string render_text(const fs::path& path, const Config& cfg) {
  const auto doc = read_document(path);
  const auto kind = document_kind(doc);
  if (kind == "sfsm") return export_dot(sfsm_from_json(doc), cfg.bound);
  if (kind == "program") return export_dot(program_as_sfsm(program_from_json(doc)), cfg.bound);
  if (kind == "fsm") return export_dot(machine_from_json(doc));
  throw FormatError(path.string() + ": cannot render a '" + kind + "' document");
}

int serve_reference(const fs::path& path) {
  const auto doc = read_document(path);
  const auto kind = document_kind(doc);
  std::unique_ptr<SutAdapter> impl;
  if (kind == "program") impl = std::make_unique<ProgramSut>(program_from_json(doc));
  else if (kind == "fsm") impl = std::make_unique<MachineSut>(machine_from_json(doc));
  else throw FormatError(path.string() + ": expected a program or fsm document");
  std::ios::sync_with_stdio(false);
  serve(std::cin, std::cout, *impl);
  return kExitPass;
}

std::vector<MutationOperator> parse_ops(const std::vector<std::string>& names) {
  std::vector<MutationOperator> ops;
  for (const auto& n : names) ops.push_back(operator_from_string(n));
  return ops;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformance testing of safety supervisors: translation, abstraction, "
               "complete test generation, execution and mutation analysis."};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> bound;
  std::optional<std::string> policy;
  std::optional<int> m_bound;
  std::optional<int> timeout_ms;
  std::optional<std::size_t> limit;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;

  app.add_option("--config", config_path, "JSON config file (default: $SCTEST_CONFIG)");
  app.add_option("--bound", bound, "enumeration bound for input spaces");
  app.add_option("--policy", policy, "incompleteness policy: error | complete-with-selfloop");
  app.add_option("--m", m_bound, "assumed maximal number of SUT states (default n)");
  app.add_option("--timeout", timeout_ms, "per-step SUT timeout in milliseconds");
  app.add_option("--limit", limit, "mutant limit before sampling");
  app.add_option("--seed", seed, "mutant sampling seed");
  app.add_option("--jobs", jobs, "parallel mutant workers");
  app.add_option("-o,--out", out, "output file or directory");

  std::string input, second;
  std::optional<std::string> map_path, sut, csv;
  std::string method = "h";
  std::vector<std::string> ops_names;
  std::string via = "oracle";
  std::string pipeline_via = "both";
  std::optional<std::size_t> mutants;

  auto* translate = app.add_subcommand("translate", "behaviour -> guarded-action program and SFSM reference");
  translate->add_option("behaviour", input)->required();

  auto* classes = app.add_subcommand("classes", "SFSM -> input-class partition");
  classes->add_option("sfsm", input)->required();

  auto* abstract = app.add_subcommand("abstract", "SFSM -> FSM and abstraction map");
  abstract->add_option("sfsm", input)->required();

  auto* generate = app.add_subcommand("generate", "FSM -> abstract test suite");
  generate->add_option("fsm", input)->required();
  generate->add_option("--method", method, "h or w")->capture_default_str();

  auto* concretize = app.add_subcommand("concretize", "abstract suite -> concrete suite");
  concretize->add_option("suite", input)->required();
  concretize->add_option("classes", second, "abstraction map or partition document")->required();
  concretize->add_option("--map", map_path, "abstraction map, when a partition is given");

  auto* check = app.add_subcommand("check-suite", "verify suite completeness against an FSM");
  check->add_option("fsm", input)->required();
  check->add_option("suite", second)->required();

  auto* run = app.add_subcommand("run", "execute a suite against a SUT process");
  run->add_option("suite", input)->required();
  run->add_option("--sut", sut, "SUT command line; {self} expands to this executable")->required();

  auto* serve_cmd = app.add_subcommand("serve-reference", "serve a program or FSM on stdin/stdout");
  serve_cmd->add_option("target", input)->required();

  auto* mutate = app.add_subcommand("mutate", "mutation analysis of a suite");
  mutate->add_option("target", input, "fsm or program document")->required();
  mutate->add_option("--suite", second)->required();
  mutate->add_option("--ops", ops_names, "output, transfer, extra-state, guard-flip (default: fault-model operators)")
      ->delimiter(',');
  mutate->add_option("--via", via, "oracle | harness | both")->capture_default_str();
  mutate->add_option("--csv", csv, "also write a CSV table");

  auto* render = app.add_subcommand("render", "SFSM, program or FSM -> DOT");
  render->add_option("file", input)->required();

  auto* pipeline = app.add_subcommand("pipeline", "all stages from a behaviour file");
  pipeline->add_option("behaviour", input)->required();
  pipeline->add_option("--sut", sut,
                       "SUT command line; {self} and {program} are expanded")->required();
  pipeline->add_option("--method", method, "h or w")->capture_default_str();
  pipeline->add_option("--ops", ops_names, "mutation operators")->delimiter(',');
  pipeline->add_option("--via", pipeline_via, "oracle | harness | both")->capture_default_str();
  pipeline->add_option("--mutants", mutants, "mutant sample size")
      ->default_str(std::to_string(kPipelineMutants));

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg;
    if (!config_path) {
      if (const char* env = std::getenv("SCTEST_CONFIG"); env && *env) config_path = env;
    }
    if (config_path) cfg = load_config(*config_path);
    if (bound) cfg.bound = *bound;
    if (policy) cfg.policy = policy_from_string(*policy);
    if (m_bound) cfg.m_bound = m_bound;
    if (timeout_ms) cfg.timeout_ms = *timeout_ms;
    if (limit) cfg.mutation_limit = *limit;
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    check_config(cfg);
    std::optional<fs::path> out_path;
    if (out) out_path = fs::path(*out);
    const fs::path out_dir = out_path.value_or(cfg.out_dir);

    if (*translate) {
      auto r = stage_translate(input, out_dir, stem_of(input), cfg);
      return r.hypotheses_pass ? kExitPass : kExitFail;
    }
    if (*classes) {
      emit(out_path, partition_document(input, cfg));
      return kExitPass;
    }
    if (*abstract) {
      stage_abstract(input, out_dir, stem_of(input), cfg);
      return kExitPass;
    }
    if (*generate) {
      emit(out_path, generate_document(input, method, cfg.m_bound));
      return kExitPass;
    }
    if (*concretize) {
      std::optional<fs::path> mp;
      if (map_path) mp = fs::path(*map_path);
      emit(out_path, concretize_document(input, second, mp));
      return kExitPass;
    }
    if (*check) return stage_check_suite(input, second, cfg.m_bound, out_path);
    if (*run) return stage_run(*sut, input, std::nullopt, out_path, cfg);
    if (*serve_cmd) return serve_reference(input);
    if (*mutate) {
      std::optional<fs::path> csv_path;
      if (csv) csv_path = fs::path(*csv);
      return stage_mutate(input, second, parse_ops(ops_names), classify_mode_from_string(via),
                          cfg.mutation_limit, out_path, csv_path, cfg);
    }
    if (*render) {
      const auto text = render_text(input, cfg);
      if (out_path) write_text(*out_path, text);
      else std::cout << text;
      return kExitPass;
    }
    if (*pipeline) {
      const std::string stem = stem_of(input);
      const auto mode = classify_mode_from_string(pipeline_via);
      auto tr = stage_translate(input, out_dir, stem, cfg);

      const auto classes_file = out_dir / (stem + ".classes.json");
      write_document(classes_file, partition_document(tr.sfsm, cfg));

      auto ab = stage_abstract(tr.sfsm, out_dir, stem, cfg);
      require_fingerprint(derived(read_document(ab.fsm), "sfsm"),
                          fingerprint(read_document(tr.sfsm)), "FSM vs SFSM reference");

      const auto fsm = machine_from_json(read_document(ab.fsm));
      const int k = cfg.m_bound.value_or(fsm.state_count());
      const auto suite_file = out_dir / (stem + ".suite.json");
      write_document(suite_file, generate_document(ab.fsm, method, k));
      const int check_rc =
          stage_check_suite(ab.fsm, suite_file, k, out_dir / (stem + ".completeness.json"));

      const auto concrete_file = out_dir / (stem + ".concrete-suite.json");
      write_document(concrete_file, concretize_document(suite_file, ab.map, std::nullopt));

      const int run_rc = stage_run(*sut, concrete_file, tr.program,
                                   out_dir / (stem + ".report.json"), cfg);

      const int mut_rc = stage_mutate(tr.program, concrete_file, parse_ops(ops_names), mode,
                                      mutants.value_or(kPipelineMutants),
                                      out_dir / (stem + ".mutation.json"),
                                      out_dir / (stem + ".mutation.csv"), cfg);

      const bool ok = tr.hypotheses_pass && check_rc == kExitPass && run_rc == kExitPass &&
                      mut_rc == kExitPass;
      std::cout << "pipeline: " << (ok ? "PASS" : "FAIL") << "\n";
      return ok ? kExitPass : kExitFail;
    }
  } catch (const std::exception& e) {
    std::cerr << "sctest: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
