#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ecmh::bench {

struct BenchConfig {
  std::size_t warmup_discard = 2000;
  std::size_t min_samples = 1000;
  std::size_t max_samples = 20000;
  /// Stop once the 99% CI half-width of the median is below this fraction of it.
  double target_ci = 0.001;
  /// Wall-clock cap per suite, warmup included.
  double max_seconds = 20.0;
  /// Timer overhead must stay below this fraction of one measurement.
  double max_overhead_fraction = 0.1;

  void validate() const;
};

struct BenchRecord {
  std::string construction;
  std::string param;
  double security_bits = 0;
  std::string operation;
  std::size_t batch = 1;
  double ns_per_elem = 0;
  std::size_t samples = 0;
  double ci_half_width = 0;
  /// Set when the CI target was not reached (timer too coarse or time cap hit).
  bool degraded = false;
};

/// One timed unit of work that processes `elements` elements; `iteration`
/// lets the workload walk its input set.
struct Suite {
  std::string construction;
  std::string param;
  double security_bits = 0;
  std::string operation;
  std::size_t batch = 1;
  std::size_t elements = 1;
  std::function<void(std::size_t iteration)> unit;
};

struct TimerCalibration {
  double overhead_ns = 0;    // median cost of an empty timed region
  double resolution_ns = 0;  // smallest nonzero clock step seen
};

TimerCalibration calibrate_timer();

/// Median ns/element with warmup discard, overhead subtraction, repeat-count
/// tuning and an order-statistic confidence interval.
BenchRecord run_suite(const Suite& suite, const BenchConfig& cfg, const TimerCalibration& timer);

/// Ranks (0-based) bounding a 99% confidence interval for the median of n
/// sorted samples.
std::pair<std::size_t, std::size_t> median_ci_ranks(std::size_t n);

inline constexpr const char* kCsvHeader = "construction,param,security_bits,operation,batch,ns_per_elem,samples,ci_half_width";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
/// Parses what write_csv produces; throws InvalidEncoding on malformed input.
std::vector<BenchRecord> parse_csv(std::istream& in);

}  // namespace ecmh::bench
