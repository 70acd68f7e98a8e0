#pragma once

// Concrete test execution against a system under test, and the reference
// SUT that serves a guarded-action program or a machine over the wire
// protocol.

#include <chrono>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sct/guard.hpp"
#include "sct/mealy.hpp"
#include "sct/suite.hpp"
#include "sct/supervisor.hpp"

namespace sct {

/// Session interface shared by subprocess and in-process SUTs. Protocol
/// failures are reported by throwing ProtocolError (or TimeoutError).
class SutAdapter {
 public:
  virtual ~SutAdapter() = default;
  virtual void reset() = 0;
  virtual Valuation step(const Valuation& input) = 0;
  /// Called after an ERROR verdict so the next case starts clean.
  virtual void restart() {}
};

inline constexpr std::chrono::milliseconds kDefaultStepTimeout{5000};

/// A child process started through `/bin/sh -c`, speaking the line
/// protocol on its standard streams.
class ProcessSut : public SutAdapter {
 public:
  explicit ProcessSut(std::string command,
                      std::chrono::milliseconds timeout = kDefaultStepTimeout);
  ~ProcessSut() override;
  ProcessSut(const ProcessSut&) = delete;
  ProcessSut& operator=(const ProcessSut&) = delete;

  void reset() override;
  Valuation step(const Valuation& input) override;
  void restart() override;

 private:
  void start();
  void stop();
  void send(const std::string& line);
  std::string receive();

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// Interprets a program directly, without a protocol layer. Inputs are
/// checked against the program's declarations.
class ProgramSut : public SutAdapter {
 public:
  explicit ProgramSut(GuardedActionProgram p);
  ProgramSut(const ProgramSut&) = delete;
  ProgramSut& operator=(const ProgramSut&) = delete;
  void reset() override;
  Valuation step(const Valuation& input) override;

 private:
  GuardedActionProgram program_;
  Interpreter interpreter_;
};

/// Serves an abstract machine: input `{"input":"<sym>"}` yields
/// `{"output":"<sym>"}`.
class MachineSut : public SutAdapter {
 public:
  explicit MachineSut(MealyMachine m);
  void reset() override;
  Valuation step(const Valuation& input) override;

 private:
  MealyMachine machine_;
  int state_;
};

/// Wraps an abstract suite in the single-variable valuations MachineSut
/// speaks, so abstract suites can run over the wire protocol.
ConcreteSuite symbolic_suite(const TestSuite& ts);

/// Answers protocol lines from `in` until end of input. Malformed lines
/// and failing steps get an `ERR` reply and leave the session unchanged.
void serve(std::istream& in, std::ostream& out, SutAdapter& impl);

enum class VerdictKind { pass, fail, error };
const char* to_string(VerdictKind k);

struct Verdict {
  std::size_t case_index = 0;
  VerdictKind kind = VerdictKind::pass;
  // FAIL only: the earliest mismatching step.
  std::size_t step = 0;
  Valuation input;
  Valuation expected;
  Valuation observed;
  // ERROR only.
  std::string message;

  bool operator==(const Verdict&) const = default;
};

struct TestReport {
  std::string method;
  int m_bound = 0;
  std::string reference_fingerprint;
  std::string suite_fingerprint;
  std::vector<Verdict> verdicts;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t errors = 0;
  std::chrono::duration<double> duration{};

  bool complete_pass() const { return failed == 0 && errors == 0; }
  /// Index of the first non-passing case.
  std::optional<std::size_t> first_failure() const;
};

/// Runs every case from a fresh RESET, stopping each case at its first
/// mismatch. Protocol errors become ERROR verdicts followed by a restart.
TestReport run_suite(SutAdapter& sut, const ConcreteSuite& ts);
/// Same, with the suite fingerprint supplied by the caller.
TestReport run_suite(SutAdapter& sut, const ConcreteSuite& ts,
                     const std::string& suite_fingerprint);

/// Machine-readable report. The duration is left out so that reports are
/// reproducible byte for byte.
nlohmann::json report_to_json(const TestReport& r);
std::string report_summary(const TestReport& r, std::size_t max_rows = 10);

}  // namespace sct
