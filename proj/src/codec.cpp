#include "sct/codec.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sct/error.hpp"
#include "sct/hash.hpp"

namespace sct {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::string string_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw FormatError(std::string("key '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw FormatError(std::string("key '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Value value_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw FormatError("valuation values must be integers or strings");
}

Json value_to_json(const Value& v) {
  if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
  return std::get<std::string>(v);
}

}  // namespace

Json read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string document_text(const Json& doc) { return doc.dump(2) + "\n"; }

void write_document(const std::filesystem::path& path, const Json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << document_text(doc);
}

std::string fingerprint(const Json& doc) { return hex64(fnv1a64(doc.dump())); }

std::string document_kind(const Json& doc) {
  if (doc.is_object() && doc.contains("kind") && doc["kind"].is_string())
    return doc["kind"].get<std::string>();
  return {};
}

// ---------------------------------------------------------------------------

Json sort_to_json(const Sort& s) {
  if (s.is_enum()) return Json{{"enum", s.literals()}};
  return Json{{"range", {s.lo(), s.hi()}}};
}

Sort sort_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "phase") return Sort::phase();
  if (j.is_object() && j.contains("enum")) {
    std::vector<std::string> lits;
    for (const auto& e : j["enum"]) {
      if (e.is_string()) lits.push_back(e.get<std::string>());
      else if (e.is_number_integer()) lits.push_back(std::to_string(e.get<std::int64_t>()));
      else throw FormatError("enumeration literals must be strings");
    }
    return Sort::enumeration(std::move(lits));
  }
  if (j.is_object() && j.contains("range")) {
    const auto& r = j["range"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
      throw FormatError("range sort must be [lo, hi]");
    return Sort::range(r[0].get<std::int64_t>(), r[1].get<std::int64_t>());
  }
  throw FormatError("unrecognised sort " + j.dump());
}

Json decls_to_json(const DeclSet& d) {
  Json out = Json::array();
  for (const auto& v : d)
    out.push_back({{"name", v.name}, {"sort", sort_to_json(v.sort)}, {"kind", to_string(v.kind)}});
  return out;
}

DeclSet decls_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("declarations must be an array");
  DeclSet out;
  for (const auto& e : j) {
    VarDecl d;
    d.name = string_field(e, "name");
    d.sort = sort_from_json(field(e, "sort"));
    d.kind = e.contains("kind") ? var_kind_from_string(string_field(e, "kind"))
                                : VarKind::monitored;
    out.push_back(std::move(d));
  }
  return out;
}

Json valuation_to_json(const Valuation& v) {
  Json j = Json::object();
  for (const auto& [name, value] : v) j[name] = value_to_json(value);
  return j;
}

Valuation valuation_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("valuation must be an object");
  Valuation v;
  for (const auto& [name, value] : j.items()) v[name] = value_from_json(value);
  return v;
}

Valuation valuation_from_json(const Json& j, const DeclSet& decls) {
  if (!j.is_object()) throw FormatError("valuation must be an object");
  Valuation v;
  for (const auto& [name, value] : j.items()) {
    const VarDecl* d = find_decl(decls, name);
    if (!d) throw UndeclaredVariable(name);
    if (d->sort.is_enum() && value.is_number_integer())
      v[name] = std::to_string(value.get<std::int64_t>());
    else
      v[name] = value_from_json(value);
  }
  check_valuation(v, decls);
  return v;
}

Valuation parse_valuation_text(const std::string& text) {
  try {
    return valuation_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed valuation: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Json machine_to_json(const MealyMachine& m) {
  const auto d = m.describe();
  Json t = Json::array();
  for (const auto& r : d.transitions)
    t.push_back({{"from", r.from}, {"input", r.input}, {"to", r.to}, {"output", r.output}});
  return Json{{"kind", "fsm"},      {"states", d.states},   {"initial", d.initial},
              {"inputs", d.inputs}, {"outputs", d.outputs}, {"transitions", t}};
}

MachineDescription machine_description_from_json(const Json& j) {
  MachineDescription d;
  d.states = string_array(j, "states");
  d.initial = string_field(j, "initial");
  d.inputs = string_array(j, "inputs");
  d.outputs = string_array(j, "outputs");
  for (const auto& t : field(j, "transitions"))
    d.transitions.push_back({string_field(t, "from"), string_field(t, "input"),
                             string_field(t, "to"), string_field(t, "output")});
  return d;
}

MealyMachine machine_from_json(const Json& j) {
  return MealyMachine::from_description(machine_description_from_json(j));
}

std::string machine_fingerprint(const MealyMachine& m) {
  return fingerprint(machine_to_json(m));
}

// ---------------------------------------------------------------------------

Json sfsm_to_json(const Sfsm& r) {
  Json t = Json::array();
  for (const auto& x : r.transitions)
    t.push_back({{"from", x.from},
                 {"action", x.action},
                 {"guard", print_guard(x.guard)},
                 {"output", valuation_to_json(x.output)},
                 {"to", x.to}});
  return Json{{"kind", "sfsm"},
              {"input_vars", decls_to_json(r.input_vars)},
              {"output_vars", decls_to_json(r.output_vars)},
              {"states", r.states},
              {"initial", r.initial},
              {"transitions", t}};
}

Sfsm sfsm_from_json(const Json& j) {
  Sfsm r;
  r.input_vars = decls_from_json(field(j, "input_vars"));
  r.output_vars = decls_from_json(field(j, "output_vars"));
  r.states = string_array(j, "states");
  r.initial = string_field(j, "initial");
  for (const auto& t : field(j, "transitions"))
    r.transitions.push_back({string_field(t, "from"),
                             t.contains("action") ? string_field(t, "action") : std::string{},
                             parse_guard(string_field(t, "guard"), r.input_vars),
                             valuation_from_json(field(t, "output"), r.output_vars),
                             string_field(t, "to")});
  check_structure(r);
  return r;
}

// ---------------------------------------------------------------------------

Json partition_to_json(const InputClassPartition& p) {
  Json classes = Json::array();
  for (const auto& c : p.classes) {
    std::string sig;
    for (bool b : c.signature) sig += b ? '1' : '0';
    classes.push_back({{"id", c.id},
                       {"signature", sig},
                       {"representative", valuation_to_json(c.representative)},
                       {"size", c.size}});
  }
  return Json{{"kind", "partition"}, {"guards", p.guards}, {"classes", classes}};
}

InputClassPartition partition_from_json(const Json& j) {
  InputClassPartition p;
  p.guards = string_array(j, "guards");
  for (const auto& c : field(j, "classes")) {
    InputClass ic;
    ic.id = string_field(c, "id");
    for (char b : string_field(c, "signature")) ic.signature.push_back(b == '1');
    ic.representative = valuation_from_json(field(c, "representative"));
    ic.size = field(c, "size").get<std::uint64_t>();
    p.classes.push_back(std::move(ic));
  }
  return p;
}

Json abstraction_map_to_json(const AbstractionMap& m) {
  Json classes = Json::object();
  for (const auto& [id, v] : m.class_representative) classes[id] = valuation_to_json(v);
  Json outputs = Json::object();
  for (const auto& [label, v] : m.output_valuation) outputs[label] = valuation_to_json(v);
  return Json{{"kind", "abstraction"}, {"classes", classes}, {"outputs", outputs}};
}

AbstractionMap abstraction_map_from_json(const Json& j) {
  AbstractionMap m;
  for (const auto& [id, v] : field(j, "classes").items())
    m.class_representative[id] = valuation_from_json(v);
  for (const auto& [label, v] : field(j, "outputs").items())
    m.output_valuation[label] = valuation_from_json(v);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

template <class Symbol, class Enc>
Json suite_json(const BasicTestSuite<Symbol>& ts, const char* kind, Enc enc) {
  Json cases = Json::array();
  for (const auto& c : ts.cases) {
    Json in = Json::array(), out = Json::array();
    for (const auto& x : c.inputs) in.push_back(enc(x));
    for (const auto& y : c.expected) out.push_back(enc(y));
    cases.push_back({{"inputs", in}, {"expectedOutputs", out}});
  }
  return Json{{"kind", kind},
              {"method", ts.method},
              {"mBound", ts.m_bound},
              {"referenceFingerprint", ts.reference_fingerprint},
              {"cases", cases}};
}

template <class Symbol, class Dec>
BasicTestSuite<Symbol> suite_from(const Json& j, Dec dec) {
  BasicTestSuite<Symbol> ts;
  ts.method = string_field(j, "method");
  ts.m_bound = field(j, "mBound").get<int>();
  ts.reference_fingerprint = string_field(j, "referenceFingerprint");
  for (const auto& c : field(j, "cases")) {
    BasicTestCase<Symbol> tc;
    for (const auto& x : field(c, "inputs")) tc.inputs.push_back(dec(x));
    for (const auto& y : field(c, "expectedOutputs")) tc.expected.push_back(dec(y));
    if (tc.inputs.size() != tc.expected.size())
      throw FormatError("test case with mismatched input/output lengths");
    ts.cases.push_back(std::move(tc));
  }
  return ts;
}

}  // namespace

Json suite_to_json(const TestSuite& ts) {
  return suite_json(ts, "suite", [](const std::string& s) { return Json(s); });
}

Json suite_to_json(const ConcreteSuite& ts) {
  return suite_json(ts, "concrete-suite", [](const Valuation& v) { return valuation_to_json(v); });
}

bool is_concrete_suite(const Json& j) { return document_kind(j) == "concrete-suite"; }

TestSuite suite_from_json(const Json& j) {
  return suite_from<std::string>(j, [](const Json& x) {
    if (!x.is_string()) throw FormatError("abstract suite symbols must be strings");
    return x.get<std::string>();
  });
}

ConcreteSuite concrete_suite_from_json(const Json& j) {
  return suite_from<Valuation>(j, [](const Json& x) { return valuation_from_json(x); });
}

// ---------------------------------------------------------------------------

Json risk_state_to_json(const std::vector<std::string>& factors, const RiskState& r) {
  Json j = Json::object();
  for (std::size_t k = 0; k < factors.size(); ++k) j[factors[k]] = phase_literal(r.phases[k]);
  return j;
}

RiskState risk_state_from_json(const Json& j, const std::vector<std::string>& factors) {
  if (!j.is_object()) throw FormatError("risk state must be an object");
  RiskState r;
  for (const auto& f : factors) {
    if (!j.contains(f)) throw FormatError("risk state lacks factor '" + f + "'");
    const auto& v = j[f];
    std::string lit = v.is_number_integer() ? std::to_string(v.get<std::int64_t>())
                      : v.is_string()       ? v.get<std::string>()
                                            : throw FormatError("phase must be a string");
    r.phases.push_back(phase_from_literal(lit));
  }
  for (const auto& [name, v] : j.items())
    if (std::find(factors.begin(), factors.end(), name) == factors.end())
      throw UndeclaredVariable(name);
  return r;
}

ControllerBehavior behavior_from_json(const Json& j) {
  ControllerBehavior b;
  const DeclSet all = decls_from_json(field(j, "vars"));
  std::map<std::string, VarKind> kinds;
  for (const auto& d : all) {
    auto [it, fresh] = kinds.emplace(d.name, d.kind);
    if (!fresh) {
      if (it->second != d.kind)
        throw DisjointnessViolation("variable '" + d.name + "' declared as both " +
                                    to_string(it->second) + " and " + to_string(d.kind));
      throw FormatError("duplicate variable '" + d.name + "'");
    }
    switch (d.kind) {
      case VarKind::monitored: b.inputs.push_back(d); break;
      case VarKind::controlled: b.outputs.push_back(d); break;
      case VarKind::factor:
        if (!(d.sort == Sort::phase()))
          throw SortMismatch("factor '" + d.name + "' must have the phase sort {0,a,m}");
        b.factors.push_back(d.name);
        break;
    }
  }
  b.initial = risk_state_from_json(field(j, "initial"), b.factors);
  for (const auto& t : field(j, "transitions")) {
    b.transitions.push_back({risk_state_from_json(field(t, "source"), b.factors),
                             parse_guard(string_field(t, "guard"), b.inputs),
                             valuation_from_json(field(t, "output"), b.outputs),
                             risk_state_from_json(field(t, "target"), b.factors)});
  }
  if (b.transitions.empty()) b.warnings.push_back("no transitions");
  return b;
}

Json behavior_to_json(const ControllerBehavior& b) {
  DeclSet all = b.inputs;
  all.insert(all.end(), b.outputs.begin(), b.outputs.end());
  for (const auto& f : b.factors) all.push_back({f, Sort::phase(), VarKind::factor});
  Json t = Json::array();
  for (const auto& x : b.transitions)
    t.push_back({{"source", risk_state_to_json(b.factors, x.source)},
                 {"guard", print_guard(x.guard)},
                 {"output", valuation_to_json(x.output)},
                 {"target", risk_state_to_json(b.factors, x.target)}});
  return Json{{"vars", decls_to_json(all)},
              {"initial", risk_state_to_json(b.factors, b.initial)},
              {"transitions", t}};
}

// ---------------------------------------------------------------------------

Json program_to_json(const GuardedActionProgram& p) {
  Json states = Json::array();
  for (const auto& s : p.states)
    states.push_back({{"id", s.id}, {"risk", risk_state_to_json(p.factors, s.risk)}});
  Json actions = Json::array();
  for (const auto& a : p.actions)
    actions.push_back({{"name", a.name},
                       {"source", a.source},
                       {"guard", print_guard(a.guard)},
                       {"output", valuation_to_json(a.output)},
                       {"target", a.target}});
  return Json{{"kind", "program"},
              {"inputs", decls_to_json(p.inputs)},
              {"outputs", decls_to_json(p.outputs)},
              {"factors", p.factors},
              {"states", states},
              {"initial", p.initial},
              {"actions", actions},
              {"policy", to_string(p.policy)},
              {"resolution", p.resolution == Resolution::unique ? "unique" : "first-match"}};
}

GuardedActionProgram program_from_json(const Json& j) {
  GuardedActionProgram p;
  p.inputs = decls_from_json(field(j, "inputs"));
  p.outputs = decls_from_json(field(j, "outputs"));
  p.factors = string_array(j, "factors");
  for (const auto& s : field(j, "states"))
    p.states.push_back({string_field(s, "id"), risk_state_from_json(field(s, "risk"), p.factors)});
  p.initial = string_field(j, "initial");
  for (const auto& a : field(j, "actions"))
    p.actions.push_back({string_field(a, "name"), parse_guard(string_field(a, "guard"), p.inputs),
                         string_field(a, "source"),
                         valuation_from_json(field(a, "output"), p.outputs),
                         string_field(a, "target")});
  if (j.contains("policy")) p.policy = policy_from_string(string_field(j, "policy"));
  if (j.contains("resolution")) {
    const auto r = string_field(j, "resolution");
    if (r == "unique") p.resolution = Resolution::unique;
    else if (r == "first-match") p.resolution = Resolution::first_match;
    else throw FormatError("unknown resolution '" + r + "'");
  }
  check_decls(p.inputs);
  check_decls(p.outputs);
  if (!p.state(p.initial)) throw FormatError("initial state '" + p.initial + "' undeclared");
  for (const auto& a : p.actions)
    if (!p.state(a.source) || !p.state(a.target))
      throw FormatError("action '" + a.name + "' references an undeclared state");
  return p;
}

}  // namespace sct
