#pragma once

#include <string>
#include <vector>

#include "ecmh/bench/bench.hpp"

namespace ecmh::bench {

/// construction in {ecmh, muhash, adhash, noop}. ECMH operations: single,
/// single_blinded, batch, batch_blinded; MuHash and AdHash: single.
struct SuiteSpec {
  std::string construction;
  std::string param;
  std::string operation;
  std::size_t batch = 1;
};

/// Parses "construction:param:operation[:batch]" ("noop" alone is accepted).
SuiteSpec parse_suite_spec(const std::string& text);
std::string to_string(const SuiteSpec& s);

/// Every registered curve and baseline modulus, plus the no-op calibration suite.
std::vector<SuiteSpec> default_suites();

/// Builds the workload over 1024 fresh random 32-byte elements.
Suite make_suite(const SuiteSpec& spec);

inline constexpr std::size_t kInputElements = 1024;
inline constexpr std::size_t kInputBytes = 32;

}  // namespace ecmh::bench
