#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sct/guard.hpp"

namespace sct {

template <class Symbol>
struct BasicTestCase {
  std::vector<Symbol> inputs;
  std::vector<Symbol> expected;

  bool operator==(const BasicTestCase&) const = default;
};

/// Only maximal traces are stored; every prefix is implied and its
/// expected outputs are the corresponding prefix of `expected`.
template <class Symbol>
struct BasicTestSuite {
  std::string method;  // "H" or "W"
  int m_bound = 0;
  std::string reference_fingerprint;
  std::vector<BasicTestCase<Symbol>> cases;

  bool operator==(const BasicTestSuite&) const = default;
};

using TestCase = BasicTestCase<std::string>;
using TestSuite = BasicTestSuite<std::string>;
using ConcreteCase = BasicTestCase<Valuation>;
using ConcreteSuite = BasicTestSuite<Valuation>;

struct SuiteStats {
  std::size_t cases = 0;
  std::size_t total_symbols = 0;
  std::size_t max_length = 0;

  bool operator==(const SuiteStats&) const = default;
};

template <class Symbol>
SuiteStats suite_stats(const BasicTestSuite<Symbol>& ts) {
  SuiteStats s;
  s.cases = ts.cases.size();
  for (const auto& c : ts.cases) {
    s.total_symbols += c.inputs.size();
    if (c.inputs.size() > s.max_length) s.max_length = c.inputs.size();
  }
  return s;
}

}  // namespace sct
