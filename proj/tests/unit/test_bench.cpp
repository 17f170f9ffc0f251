#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ecmh/bench/bench.hpp"
#include "ecmh/bench/suites.hpp"
#include "ecmh/error.hpp"
#include "ecmh/registry.hpp"

using namespace ecmh;
using namespace ecmh::bench;

TEST_CASE("bench: median confidence ranks") {
  for (std::size_t n : {100u, 1000u, 20000u}) {
    const auto [lo, hi] = median_ci_ranks(n);
    CHECK(lo < n / 2);
    CHECK(hi >= n / 2);
    CHECK(hi < n);
    // about 2.576 sqrt(n) ranks wide, as the binomial normal approximation gives
    CHECK(double(hi - lo) == doctest::Approx(2.576 * std::sqrt(double(n))).epsilon(0.1));
  }
  const auto [lo, hi] = median_ci_ranks(1);
  CHECK(lo == 0);
  CHECK(hi == 0);
}

TEST_CASE("bench: CSV round trip") {
  std::vector<BenchRecord> recs = {
      {"ecmh", "sect233k1", 115.5, "batch", 256, 1208.8671875, 4100, 1.25, false},
      {"muhash", "p3072", 128, "single", 1, 7074, 1000, 3.5, true},
      {"noop", "-", 0, "noop", 1, 0.015625, 1000, 0.0078125, false},
  };
  std::stringstream out;
  write_csv(out, recs);
  const std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) == kCsvHeader);
  std::istringstream in(text);
  const auto back = parse_csv(in);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].construction == recs[i].construction);
    CHECK(back[i].param == recs[i].param);
    CHECK(back[i].security_bits == recs[i].security_bits);
    CHECK(back[i].operation == recs[i].operation);
    CHECK(back[i].batch == recs[i].batch);
    CHECK(back[i].ns_per_elem == recs[i].ns_per_elem);
    CHECK(back[i].samples == recs[i].samples);
    CHECK(back[i].ci_half_width == recs[i].ci_half_width);
  }
  std::stringstream again;
  write_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("bench: malformed CSV") {
  const auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_csv(in);
  };
  CHECK_THROWS_AS(parse(""), InvalidEncoding);
  CHECK_THROWS_AS(parse("construction,param\n"), InvalidEncoding);
  const std::string h = std::string(kCsvHeader) + "\n";
  CHECK(parse(h).empty());
  CHECK_THROWS_AS(parse(h + "ecmh,toy13,6,single,1,700,300\n"), InvalidEncoding);
  CHECK_THROWS_AS(parse(h + "ecmh,toy13,6,single,one,700,300,1\n"), InvalidEncoding);
}

TEST_CASE("bench: suite specs and configuration") {
  const auto s = parse_suite_spec("ecmh:sect163k1:batch_blinded:64");
  CHECK(s.construction == "ecmh");
  CHECK(s.param == "sect163k1");
  CHECK(s.operation == "batch_blinded");
  CHECK(s.batch == 64);
  CHECK(parse_suite_spec("ecmh:toy13:batch").batch == 256);
  CHECK(parse_suite_spec("muhash:p1024:single").batch == 1);
  CHECK(parse_suite_spec("noop").construction == "noop");
  CHECK_THROWS_AS(parse_suite_spec("ecmh:toy13"), ParameterError);
  CHECK_THROWS_AS(parse_suite_spec("ecmh:toy13:batch:x"), ParameterError);
  CHECK_THROWS_AS(make_suite(parse_suite_spec("ecmh:toy13:sideways")), ParameterError);
  CHECK_THROWS_AS(make_suite(parse_suite_spec("ecmh:nosuch:single")), ParameterError);

  const auto all = default_suites();
  CHECK(all.front().construction == "noop");
  const Registry& reg = Registry::instance();
  CHECK(all.size() == 1 + 4 * reg.curve_names().size() + reg.muhash_names().size() + reg.adhash_names().size());

  BenchConfig cfg;
  CHECK(cfg.warmup_discard == 2000);
  CHECK(cfg.min_samples == 1000);
  CHECK(cfg.target_ci == 0.001);
  cfg.min_samples = 99;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("bench: a suite run yields a positive median and a CI") {
  BenchConfig cfg;
  cfg.warmup_discard = 50;
  cfg.min_samples = 100;
  cfg.max_samples = 400;
  cfg.target_ci = 0.05;
  cfg.max_seconds = 2;
  const auto timer = calibrate_timer();
  CHECK(timer.overhead_ns > 0);
  const auto rec = run_suite(make_suite(parse_suite_spec("ecmh:toy13:single")), cfg, timer);
  CHECK(rec.ns_per_elem > 0);
  CHECK(rec.samples >= 100);
  CHECK(rec.ci_half_width >= 0);
  CHECK(rec.construction == "ecmh");
  CHECK(rec.security_bits > 0);
}
