#pragma once

// Document encodings of every artefact. All documents are JSON objects
// with sorted keys; files are written with two-space indentation and a
// trailing newline so they are byte-stable.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sct/guard.hpp"
#include "sct/mealy.hpp"
#include "sct/sfsm.hpp"
#include "sct/suite.hpp"
#include "sct/supervisor.hpp"

namespace sct {

using Json = nlohmann::json;

Json read_document(const std::filesystem::path& path);
void write_document(const std::filesystem::path& path, const Json& doc);
std::string document_text(const Json& doc);

/// FNV-1a 64 over the compact dump, as 16 hex digits.
std::string fingerprint(const Json& doc);

/// `kind` field of a document, empty if absent.
std::string document_kind(const Json& doc);

Json sort_to_json(const Sort& s);
Sort sort_from_json(const Json& j);
Json decls_to_json(const DeclSet& d);
DeclSet decls_from_json(const Json& j);

Json valuation_to_json(const Valuation& v);
/// Numbers become integers, strings stay literals.
Valuation valuation_from_json(const Json& j);
/// Coerces values to the declared sorts, then checks totality.
Valuation valuation_from_json(const Json& j, const DeclSet& decls);
/// Parses a single-line canonical encoding.
Valuation parse_valuation_text(const std::string& text);

Json machine_to_json(const MealyMachine& m);
MachineDescription machine_description_from_json(const Json& j);
MealyMachine machine_from_json(const Json& j);
/// Fingerprint of the canonical machine encoding (without extra keys).
std::string machine_fingerprint(const MealyMachine& m);

Json sfsm_to_json(const Sfsm& r);
Sfsm sfsm_from_json(const Json& j);

Json partition_to_json(const InputClassPartition& p);
InputClassPartition partition_from_json(const Json& j);

Json abstraction_map_to_json(const AbstractionMap& m);
AbstractionMap abstraction_map_from_json(const Json& j);

Json suite_to_json(const TestSuite& ts);
Json suite_to_json(const ConcreteSuite& ts);
TestSuite suite_from_json(const Json& j);
ConcreteSuite concrete_suite_from_json(const Json& j);
bool is_concrete_suite(const Json& j);

Json risk_state_to_json(const std::vector<std::string>& factors, const RiskState& r);
RiskState risk_state_from_json(const Json& j, const std::vector<std::string>& factors);

ControllerBehavior behavior_from_json(const Json& j);
Json behavior_to_json(const ControllerBehavior& b);

Json program_to_json(const GuardedActionProgram& p);
GuardedActionProgram program_from_json(const Json& j);

}  // namespace sct
