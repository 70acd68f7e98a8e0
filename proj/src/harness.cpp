#include "sct/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "sct/codec.hpp"
#include "sct/error.hpp"

namespace sct {

namespace {

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

// Enumeration literals may arrive as numbers ("0" vs 0); fold them onto
// the declared sort before checking.
Valuation coerce(const Valuation& v, const DeclSet& decls) {
  Valuation out;
  for (const auto& [name, value] : v) {
    const VarDecl* d = find_decl(decls, name);
    if (d && d->sort.is_enum() && std::holds_alternative<std::int64_t>(value))
      out[name] = std::to_string(std::get<std::int64_t>(value));
    else
      out[name] = value;
  }
  check_valuation(out, decls);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProcessSut

ProcessSut::ProcessSut(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  ignore_sigpipe();
  start();
}

ProcessSut::~ProcessSut() { stop(); }

void ProcessSut::start() {
  int in[2], out[2];
  if (::pipe2(in, O_CLOEXEC) != 0) throw Error(errno_text("cannot create pipe"));
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw Error(errno_text("cannot create pipe"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) ::close(fd);
    throw Error(errno_text("cannot spawn SUT"));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in[0], STDIN_FILENO);
    ::dup2(out[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in[0]);
  ::close(out[1]);
  pid_ = pid;
  to_child_ = in[1];
  from_child_ = out[0];
  buffer_.clear();
}

void ProcessSut::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ < 0) return;
  // A well-behaved SUT exits on end of input; give it a moment.
  int status = 0;
  for (int k = 0; k < 50; ++k) {
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      ::kill(-pid_, SIGKILL);
      pid_ = -1;
      return;
    }
    ::usleep(2000);
  }
  ::kill(-pid_, SIGKILL);
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
}

void ProcessSut::restart() {
  stop();
  start();
}

void ProcessSut::send(const std::string& line) {
  std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    ssize_t n = ::write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("cannot write to SUT"));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string ProcessSut::receive() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0)
      throw TimeoutError("SUT did not answer within " + std::to_string(timeout_.count()) + " ms");
    pollfd p{from_child_, POLLIN, 0};
    int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("poll failed"));
    }
    if (r == 0) continue;
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(errno_text("cannot read from SUT"));
    }
    if (n == 0) throw ProtocolError("SUT closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

namespace {

[[noreturn]] void unexpected_reply(const std::string& reply, const char* wanted) {
  if (reply.rfind("ERR", 0) == 0)
    throw ProtocolError("SUT reported an error:" + reply.substr(3));
  throw ProtocolError(std::string("expected ") + wanted + ", got '" + reply + "'");
}

}  // namespace

void ProcessSut::reset() {
  send("RESET");
  auto reply = receive();
  if (reply != "READY") unexpected_reply(reply, "READY");
}

Valuation ProcessSut::step(const Valuation& input) {
  send("IN " + canonical_text(input));
  auto reply = receive();
  if (reply.rfind("OUT ", 0) != 0) unexpected_reply(reply, "OUT");
  try {
    return parse_valuation_text(reply.substr(4));
  } catch (const FormatError& e) {
    throw ProtocolError(e.what());
  }
}

// ---------------------------------------------------------------------------
// In-process SUTs

ProgramSut::ProgramSut(GuardedActionProgram p)
    : program_(std::move(p)), interpreter_(program_) {}

void ProgramSut::reset() { interpreter_.reset(); }

Valuation ProgramSut::step(const Valuation& input) {
  return interpreter_.step(coerce(input, program_.inputs));
}

MachineSut::MachineSut(MealyMachine m) : machine_(std::move(m)), state_(machine_.initial()) {}

void MachineSut::reset() { state_ = machine_.initial(); }

Valuation MachineSut::step(const Valuation& input) {
  auto it = input.find("input");
  if (input.size() != 1 || it == input.end() || !std::holds_alternative<std::string>(it->second))
    throw FormatError("expected a valuation of the form {\"input\":<symbol>}");
  const auto& sym = std::get<std::string>(it->second);
  auto x = machine_.input_index(sym);
  if (!x) throw FormatError("unknown input '" + sym + "'");
  const auto& e = machine_.edge(state_, *x);
  if (!e) throw UndefinedTransition(machine_.states()[state_], sym);
  state_ = e->target;
  return Valuation{{"output", machine_.outputs()[e->output]}};
}

ConcreteSuite symbolic_suite(const TestSuite& ts) {
  ConcreteSuite out{ts.method, ts.m_bound, ts.reference_fingerprint, {}};
  for (const auto& c : ts.cases) {
    ConcreteCase cc;
    for (const auto& x : c.inputs) cc.inputs.push_back({{"input", x}});
    for (const auto& y : c.expected) cc.expected.push_back({{"output", y}});
    out.cases.push_back(std::move(cc));
  }
  return out;
}

void serve(std::istream& in, std::ostream& out, SutAdapter& impl) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "RESET") {
      impl.reset();
      out << "READY\n";
    } else if (line.rfind("IN ", 0) == 0) {
      try {
        const auto reply = canonical_text(impl.step(parse_valuation_text(line.substr(3))));
        out << "OUT " << reply << "\n";
      } catch (const Error& e) {
        out << "ERR " << e.what() << "\n";
      }
    } else {
      out << "ERR unknown command\n";
    }
    out.flush();
  }
}

// ---------------------------------------------------------------------------
// Execution and reports

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::pass: return "PASS";
    case VerdictKind::fail: return "FAIL";
    case VerdictKind::error: return "ERROR";
  }
  return "?";
}

std::optional<std::size_t> TestReport::first_failure() const {
  for (const auto& v : verdicts)
    if (v.kind != VerdictKind::pass) return v.case_index;
  return std::nullopt;
}

TestReport run_suite(SutAdapter& sut, const ConcreteSuite& ts) {
  return run_suite(sut, ts, fingerprint(suite_to_json(ts)));
}

TestReport run_suite(SutAdapter& sut, const ConcreteSuite& ts,
                     const std::string& suite_fingerprint) {
  const auto started = std::chrono::steady_clock::now();
  TestReport rep;
  rep.method = ts.method;
  rep.m_bound = ts.m_bound;
  rep.reference_fingerprint = ts.reference_fingerprint;
  rep.suite_fingerprint = suite_fingerprint;
  for (std::size_t c = 0; c < ts.cases.size(); ++c) {
    const auto& tc = ts.cases[c];
    Verdict v;
    v.case_index = c;
    try {
      sut.reset();
      for (std::size_t k = 0; k < tc.inputs.size(); ++k) {
        auto observed = sut.step(tc.inputs[k]);
        if (observed != tc.expected[k]) {
          v.kind = VerdictKind::fail;
          v.step = k;
          v.input = tc.inputs[k];
          v.expected = tc.expected[k];
          v.observed = std::move(observed);
          break;
        }
      }
    } catch (const Error& e) {
      v.kind = VerdictKind::error;
      v.message = e.what();
      try {
        sut.restart();
      } catch (const Error&) {
        // The next case reports the failure again.
      }
    }
    switch (v.kind) {
      case VerdictKind::pass: ++rep.passed; break;
      case VerdictKind::fail: ++rep.failed; break;
      case VerdictKind::error: ++rep.errors; break;
    }
    rep.verdicts.push_back(std::move(v));
  }
  rep.duration = std::chrono::steady_clock::now() - started;
  return rep;
}

Json report_to_json(const TestReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json j{{"case", v.case_index}, {"verdict", to_string(v.kind)}};
    if (v.kind == VerdictKind::fail) {
      j["step"] = v.step;
      j["input"] = valuation_to_json(v.input);
      j["expected"] = valuation_to_json(v.expected);
      j["observed"] = valuation_to_json(v.observed);
    } else if (v.kind == VerdictKind::error) {
      j["message"] = v.message;
    }
    verdicts.push_back(std::move(j));
  }
  return Json{{"kind", "report"},
              {"method", r.method},
              {"mBound", r.m_bound},
              {"referenceFingerprint", r.reference_fingerprint},
              {"suiteFingerprint", r.suite_fingerprint},
              {"summary",
               {{"cases", r.verdicts.size()},
                {"pass", r.passed},
                {"fail", r.failed},
                {"error", r.errors},
                {"completePass", r.complete_pass()}}},
              {"verdicts", std::move(verdicts)}};
}

std::string report_summary(const TestReport& r, std::size_t max_rows) {
  std::ostringstream os;
  os << "cases  pass  fail  error  time\n"
     << std::left << std::setw(7) << r.verdicts.size() << std::setw(6) << r.passed
     << std::setw(6) << r.failed << std::setw(7) << r.errors << std::fixed
     << std::setprecision(3) << r.duration.count() << "s\n";
  std::size_t shown = 0;
  for (const auto& v : r.verdicts) {
    if (v.kind == VerdictKind::pass) continue;
    if (shown++ == max_rows) {
      os << "  ...\n";
      break;
    }
    os << "  case " << v.case_index << " " << to_string(v.kind);
    if (v.kind == VerdictKind::fail)
      os << " at step " << v.step << ": input " << canonical_text(v.input) << " expected "
         << canonical_text(v.expected) << " observed " << canonical_text(v.observed);
    else
      os << ": " << v.message;
    os << "\n";
  }
  os << (r.complete_pass() ? "verdict: complete pass\n" : "verdict: not conforming\n");
  return os.str();
}

}  // namespace sct
