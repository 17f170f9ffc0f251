// ecmh: multiset hashing from the command line.
//
// Exit codes: 0 success (eq: equal), 1 eq: not equal, 2 usage error or unknown
// parameter, 3 malformed input stream or digest, 4 operands from different
// constructions or parameter sets, 5 other failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <thread>

#include "ecmh/bench/suites.hpp"
#include "ecmh/error.hpp"
#include "ecmh/hash/multiset_hash.hpp"

using namespace ecmh;

namespace {

enum Exit : int { kOk = 0, kUnequal = 1, kUsage = 2, kMalformed = 3, kMismatch = 4, kFailure = 5 };

struct Failure {
  int code;
  std::string message;
};

struct Common {
  std::string construction;
  std::string param;
  std::string key_hex;
  bool raw = false;
};

/// A digest argument: "construction:param:hex", plain hex, or a file holding either.
struct TaggedDigest {
  std::string construction;
  std::string param;
  Bytes bytes;
};

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

TaggedDigest parse_digest(std::string arg) {
  if (arg.find(':') == std::string::npos && std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    arg.assign(std::istreambuf_iterator<char>(in), {});
  }
  arg = trim(arg);
  TaggedDigest d;
  const auto c1 = arg.find(':');
  std::string hex = arg;
  if (c1 != std::string::npos) {
    const auto c2 = arg.find(':', c1 + 1);
    if (c2 == std::string::npos) throw Failure{kMalformed, "digest must be construction:param:hex or hex: " + arg};
    d.construction = arg.substr(0, c1);
    d.param = arg.substr(c1 + 1, c2 - c1 - 1);
    hex = arg.substr(c2 + 1);
  }
  try {
    d.bytes = from_hex(hex);
  } catch (const InvalidEncoding& e) {
    throw Failure{kMalformed, std::string("digest: ") + e.what()};
  }
  return d;
}

/// Resolves the construction and parameter set from flags and digest tags.
void resolve(Common& c, const std::vector<TaggedDigest>& ds) {
  for (const auto& d : ds) {
    if (d.construction.empty()) continue;
    if (c.construction.empty()) c.construction = d.construction;
    if (c.param.empty()) c.param = d.param;
    if (d.construction != c.construction || d.param != c.param) {
      throw Failure{kMismatch, "operand " + d.construction + ":" + d.param + " does not match " + c.construction + ":" +
                                   c.param};
    }
  }
  if (c.construction.empty() || c.param.empty()) {
    throw Failure{kUsage, "--construction and --param are required unless digests are tagged"};
  }
}

std::unique_ptr<MultisetHash> make_hash(const Common& c) {
  Bytes key;
  try {
    key = from_hex(c.key_hex);
  } catch (const InvalidEncoding& e) {
    throw Failure{kUsage, std::string("--key: ") + e.what()};
  }
  try {
    return make_multiset_hash(c.construction, c.param, key);
  } catch (const ParameterError& e) {
    throw Failure{kUsage, e.what()};
  }
}

Bytes validated(const MultisetHash& h, const TaggedDigest& d) {
  try {
    h.validate(d.bytes);
  } catch (const InvalidEncoding& e) {
    throw Failure{kMalformed, std::string("digest: ") + e.what()};
  }
  return d.bytes;
}

void print_digest(const MultisetHash& h, const Common& c, ByteView d) {
  if (c.raw) {
    std::cout << to_hex(d) << '\n';
  } else {
    std::cout << h.construction() << ':' << h.param() << ':' << to_hex(d) << '\n';
  }
}

bool valid_utf8(std::string_view s) {
  static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t n;
    if (b < 0x80) {
      n = 0;
    } else if ((b >> 5) == 0x6) {
      n = 1;
    } else if ((b >> 4) == 0xe) {
      n = 2;
    } else if ((b >> 3) == 0x1e) {
      n = 3;
    } else {
      return false;
    }
    if (i + n >= s.size() && n > 0) return false;
    std::uint32_t cp = n == 0 ? b : b & (0x3fu >> n);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto c = static_cast<unsigned char>(s[i + k]);
      if ((c & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3f);
    }
    if (cp < kMin[n] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += n + 1;
  }
  return true;
}

std::vector<Bytes> read_stream(const std::string& path, const std::string& format) {
  std::string data;
  if (path == "-") {
    data.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "cannot open input " + path};
    data.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::vector<Bytes> items;
  if (format == "lines") {
    std::size_t pos = 0;
    while (pos < data.size()) {
      std::size_t nl = data.find('\n', pos);
      if (nl == std::string::npos) nl = data.size();
      const std::string_view line(data.data() + pos, nl - pos);
      if (!valid_utf8(line)) throw Failure{kMalformed, "line " + std::to_string(items.size() + 1) + " is not valid UTF-8"};
      items.emplace_back(line.begin(), line.end());
      pos = nl + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos < data.size()) {
      if (data.size() - pos < 4) throw Failure{kMalformed, "truncated length prefix at byte " + std::to_string(pos)};
      std::size_t len = 0;
      for (int k = 0; k < 4; ++k) len = (len << 8) | static_cast<unsigned char>(data[pos + k]);
      pos += 4;
      if (data.size() - pos < len) throw Failure{kMalformed, "item at byte " + std::to_string(pos - 4) + " overruns the input"};
      items.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(pos), data.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
  }
  return items;
}

Bytes hash_items(const MultisetHash& h, const std::vector<Bytes>& items, unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size() / 1024 + 1)));
  std::vector<Bytes> parts(threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const auto local = h.thread_copy();
        auto sink = local->sink();
        for (std::size_t i = t; i < items.size(); i += threads) sink->add(items[i], 1);
        parts[t] = sink->finish();
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Bytes acc = parts[0];
  for (unsigned t = 1; t < threads; ++t) acc = h.unite(acc, parts[t]);
  return acc;
}

void add_common(CLI::App* app, Common& c, bool need) {
  auto* con = app->add_option("--construction", c.construction, "ecmh, muhash or adhash");
  auto* par = app->add_option("--param", c.param, "parameter set: toy13, sect163k1, sect233k1, p1024, n128, ...");
  if (need) {
    con->required();
    par->required();
  }
  app->add_option("--key", c.key_hex, "hash key as hex (empty: unkeyed)");
  app->add_flag("--raw", c.raw, "print bare hex instead of construction:param:hex");
}

int run(int argc, char** argv) {
  CLI::App app{"Homomorphic multiset hashing (ECMH, MuHash, AdHash)"};
  app.require_subcommand(1);

  Common hc;
  std::string format = "lines", in = "-";
  unsigned threads = 1;
  auto* hash = app.add_subcommand("hash", "hash a multiset stream (each item multiplicity +1)");
  add_common(hash, hc, true);
  hash->add_option("--format", format, "lines or lp (4-byte big-endian length prefix)")->check(CLI::IsMember({"lines", "lp"}));
  hash->add_option("--in", in, "input path, - for stdin");
  hash->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  Common uc;
  std::string u_digest, element, element_hex;
  long long delta = 1;
  auto* update = app.add_subcommand("update", "add delta copies of an element to a digest");
  add_common(update, uc, false);
  update->add_option("digest", u_digest, "digest (tagged, hex or file)")->required();
  auto* e1 = update->add_option("--element", element, "element as text");
  auto* e2 = update->add_option("--element-hex", element_hex, "element as hex");
  e1->excludes(e2);
  update->add_option("--delta", delta, "nonzero multiplicity change");

  Common nc;
  std::vector<std::string> u_digests;
  auto* unite = app.add_subcommand("union", "combine digests of several multisets");
  add_common(unite, nc, false);
  unite->add_option("digests", u_digests, "digests (tagged, hex or files)")->required()->expected(2, -1);

  Common ec;
  std::vector<std::string> e_digests;
  auto* eq = app.add_subcommand("eq", "exit 0 when two digests are equal, 1 otherwise");
  add_common(eq, ec, false);
  eq->add_option("digests", e_digests, "two digests")->required()->expected(2);

  std::vector<std::string> suites;
  std::string csv_path;
  bench::BenchConfig cfg;
  bool quick = false;
  auto* bench_cmd = app.add_subcommand("bench", "run benchmark suites and print CSV");
  bench_cmd->add_option("--suite", suites, "construction:param:operation[:batch]; default: all registered");
  bench_cmd->add_option("--csv", csv_path, "also write CSV to this file");
  bench_cmd->add_option("--warmup", cfg.warmup_discard, "measurements discarded before sampling");
  bench_cmd->add_option("--min-samples", cfg.min_samples, "minimum samples per suite")->check(CLI::Range(100ul, 100000000ul));
  bench_cmd->add_option("--target-ci", cfg.target_ci, "relative 99% CI half-width to stop at");
  bench_cmd->add_option("--max-seconds", cfg.max_seconds, "time cap per suite");
  bench_cmd->add_flag("--quick", quick, "200 warmup, 300 samples, 2 s cap, 1% CI");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (*hash) {
    const auto h = make_hash(hc);
    const auto items = read_stream(in, format);
    print_digest(*h, hc, hash_items(*h, items, threads));
    return kOk;
  }
  if (*update) {
    const TaggedDigest d = parse_digest(u_digest);
    resolve(uc, {d});
    const auto h = make_hash(uc);
    if (delta == 0) throw Failure{kUsage, "--delta must be nonzero"};
    Bytes e;
    if (!element_hex.empty()) {
      try {
        e = from_hex(element_hex);
      } catch (const InvalidEncoding& x) {
        throw Failure{kUsage, std::string("--element-hex: ") + x.what()};
      }
    } else {
      e.assign(element.begin(), element.end());
    }
    print_digest(*h, uc, h->update(validated(*h, d), e, delta));
    return kOk;
  }
  if (*unite || *eq) {
    Common& c = *unite ? nc : ec;
    std::vector<TaggedDigest> ds;
    for (const auto& a : *unite ? u_digests : e_digests) ds.push_back(parse_digest(a));
    resolve(c, ds);
    const auto h = make_hash(c);
    Bytes acc = validated(*h, ds[0]);
    if (*eq) return h->equal(acc, validated(*h, ds[1])) ? kOk : kUnequal;
    for (std::size_t i = 1; i < ds.size(); ++i) acc = h->unite(acc, validated(*h, ds[i]));
    print_digest(*h, c, acc);
    return kOk;
  }
  if (*bench_cmd) {
    if (quick) {
      cfg.warmup_discard = 200;
      cfg.min_samples = 300;
      cfg.max_seconds = 2;
      cfg.target_ci = 0.01;
    }
    std::vector<bench::SuiteSpec> specs;
    try {
      for (const auto& s : suites) specs.push_back(bench::parse_suite_spec(s));
      if (specs.empty()) specs = bench::default_suites();
      cfg.validate();
    } catch (const ParameterError& e) {
      throw Failure{kUsage, e.what()};
    }
    const auto timer = bench::calibrate_timer();
    std::cerr << "timer overhead " << timer.overhead_ns << " ns, resolution " << timer.resolution_ns << " ns\n";
    std::vector<bench::BenchRecord> records;
    for (const auto& s : specs) {
      bench::Suite suite;
      try {
        suite = bench::make_suite(s);
      } catch (const ParameterError& e) {
        throw Failure{kUsage, e.what()};
      }
      records.push_back(bench::run_suite(suite, cfg, timer));
      const auto& r = records.back();
      std::cerr << bench::to_string(s) << ": " << r.ns_per_elem << " ns/elem (+-" << r.ci_half_width << ", n=" << r.samples
                << ")" << (r.degraded ? " [warning: CI target not reached]" : "") << '\n';
    }
    bench::write_csv(std::cout, records);
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      if (!out) throw Failure{kUsage, "cannot write " + csv_path};
      bench::write_csv(out, records);
    }
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Failure& f) {
    std::cerr << "ecmh: " << f.message << '\n';
    return f.code;
  } catch (const InvalidUpdate& e) {
    std::cerr << "ecmh: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidEncoding& e) {
    std::cerr << "ecmh: " << e.what() << '\n';
    return kMalformed;
  } catch (const ParameterMismatch& e) {
    std::cerr << "ecmh: " << e.what() << '\n';
    return kMismatch;
  } catch (const ParameterError& e) {
    std::cerr << "ecmh: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "ecmh: " << e.what() << '\n';
    return kFailure;
  }
}
