#include "ecmh/bench/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ecmh/error.hpp"

namespace ecmh::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::nano>(b - a).count();
}

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

void BenchConfig::validate() const {
  if (min_samples < 100) throw ParameterError("min_samples must be at least 100");
  if (max_samples < min_samples) throw ParameterError("max_samples below min_samples");
  if (!(target_ci > 0)) throw ParameterError("target_ci must be positive");
}

TimerCalibration calibrate_timer() {
  TimerCalibration cal;
  std::vector<double> empty(20001);
  double res = 1e300;
  for (auto& e : empty) {
    const auto a = Clock::now();
    const auto b = Clock::now();
    e = elapsed_ns(a, b);
    if (e > 0) res = std::min(res, e);
  }
  cal.overhead_ns = median_of(empty);
  cal.resolution_ns = res == 1e300 ? 1.0 : res;
  return cal;
}

std::pair<std::size_t, std::size_t> median_ci_ranks(std::size_t n) {
  // normal approximation to the binomial: n/2 -+ z sqrt(n)/2, z = 2.576
  const double half = 2.576 * std::sqrt(static_cast<double>(n)) / 2;
  const double mid = (static_cast<double>(n) - 1) / 2;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(mid - half)));
  const auto hi = static_cast<std::size_t>(std::min(static_cast<double>(n - 1), std::ceil(mid + half)));
  return {lo, hi};
}

BenchRecord run_suite(const Suite& suite, const BenchConfig& cfg, const TimerCalibration& timer) {
  cfg.validate();
  if (suite.elements == 0 || !suite.unit) throw ParameterError("benchmark suite has no work");
  const auto start = Clock::now();
  std::size_t iter = 0;
  auto measure = [&](std::size_t repeats) {
    const auto a = Clock::now();
    for (std::size_t r = 0; r < repeats; ++r) suite.unit(iter++);
    const auto b = Clock::now();
    return elapsed_ns(a, b);
  };

  // repeat count: double until the timer overhead is a small part of a measurement
  const double floor_ns = std::max(timer.overhead_ns, timer.resolution_ns) / cfg.max_overhead_fraction;
  std::size_t repeats = 1;
  for (;;) {
    std::vector<double> probe(5);
    for (auto& p : probe) p = measure(repeats);
    if (median_of(probe) >= floor_ns || repeats >= (std::size_t{1} << 24)) break;
    repeats *= 2;
  }

  for (std::size_t i = 0; i < cfg.warmup_discard && elapsed_ns(start, Clock::now()) < cfg.max_seconds * 0.25e9; ++i) {
    (void)measure(repeats);
  }

  const double per = static_cast<double>(repeats * suite.elements);
  std::vector<double> samples;
  samples.reserve(cfg.min_samples);
  BenchRecord rec{suite.construction, suite.param, suite.security_bits, suite.operation, suite.batch, 0, 0, 0, false};
  for (;;) {
    samples.push_back((measure(repeats) - timer.overhead_ns) / per);
    const std::size_t n = samples.size();
    const bool out_of_time = elapsed_ns(start, Clock::now()) > cfg.max_seconds * 1e9;
    if (n < cfg.min_samples && !out_of_time) continue;
    // check the CI every 10% growth to keep the sort cost down
    if (n % std::max<std::size_t>(1, n / 10) != 0 && n < cfg.max_samples && !out_of_time) continue;
    std::vector<double> sorted = samples;
    const double med = median_of(sorted);
    const auto [lo, hi] = median_ci_ranks(n);
    const double half = (sorted[hi] - sorted[lo]) / 2;
    rec.ns_per_elem = med;
    rec.samples = n;
    rec.ci_half_width = half;
    const bool met = half <= cfg.target_ci * std::abs(med);
    if (met) break;
    if (n >= cfg.max_samples || out_of_time) {
      rec.degraded = true;
      break;
    }
  }
  return rec;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.construction << ',' << r.param << ',' << shortest(r.security_bits) << ',' << r.operation << ',' << r.batch
        << ',' << shortest(r.ns_per_elem) << ',' << r.samples << ',' << shortest(r.ci_half_width) << '\n';
  }
}

std::vector<BenchRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw InvalidEncoding("benchmark CSV: missing or wrong header");
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw InvalidEncoding("benchmark CSV: expected 8 fields in '" + line + "'");
    try {
      BenchRecord r;
      r.construction = f[0];
      r.param = f[1];
      r.security_bits = std::stod(f[2]);
      r.operation = f[3];
      r.batch = std::stoul(f[4]);
      r.ns_per_elem = std::stod(f[5]);
      r.samples = std::stoul(f[6]);
      r.ci_half_width = std::stod(f[7]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw InvalidEncoding("benchmark CSV: bad number in '" + line + "'");
    }
  }
  return out;
}

}  // namespace ecmh::bench
