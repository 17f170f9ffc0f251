#include "ecmh/bench/suites.hpp"

#include <atomic>
#include <memory>

#include "ecmh/baselines/muhash.hpp"
#include "ecmh/baselines/security.hpp"
#include "ecmh/error.hpp"
#include "ecmh/hash/ecmh.hpp"
#include "ecmh/random.hpp"

namespace ecmh::bench {

namespace {

std::shared_ptr<std::vector<Bytes>> random_inputs() {
  SystemRandom rng;
  auto v = std::make_shared<std::vector<Bytes>>(kInputElements, Bytes(kInputBytes));
  for (auto& e : *v) {
    for (auto& b : e) b = static_cast<std::uint8_t>(rng.next_u64());
  }
  return v;
}

template <std::size_t L>
Suite ecmh_suite(const SuiteSpec& spec) {
  using H = Ecmh<L>;
  auto curve = std::make_shared<const BinaryCurve<L>>(BinaryCurve<L>::from_registry(spec.param));
  auto enc = std::make_shared<const SwEncoder<L>>(SwEncoder<L>::for_registry_curve(curve));
  auto h = std::make_shared<H>(enc, Bytes(16, 0x5c));
  auto inputs = random_inputs();
  Suite s{"ecmh", spec.param, security::ecmh_security_bits(curve->subgroup_order()), spec.operation, spec.batch, 1, {}};

  if (spec.operation == "single" || spec.operation == "single_blinded") {
    if (spec.batch != 1) throw ParameterError("single-element suites take batch 1");
    auto d = std::make_shared<typename H::Digest>(h->empty());
    if (spec.operation == "single") {
      s.unit = [h, d, inputs](std::size_t i) { h->update(*d, (*inputs)[i % kInputElements], 1); };
    } else {
      auto rng = std::make_shared<SystemRandom>();
      s.unit = [h, d, inputs, rng](std::size_t i) {
        const auto w = h->element_hash((*inputs)[i % kInputElements]);
        h->add_point(*d, h->encoder().encode_blinded(w, *rng), 1);
      };
    }
    return s;
  }
  if (spec.operation == "batch" || spec.operation == "batch_blinded") {
    if (spec.batch < 2) throw ParameterError("batch suites need batch >= 2");
    const std::size_t batch = spec.batch;
    auto ops = std::make_shared<std::vector<UpdateOp>>();
    for (std::size_t i = 0; i < kInputElements + batch; ++i) ops->push_back({(*inputs)[i % kInputElements], 1});
    auto sink = std::make_shared<typename H::Digest>(h->empty());
    std::shared_ptr<SystemRandom> rng;
    if (spec.operation == "batch_blinded") rng = std::make_shared<SystemRandom>();
    s.elements = batch;
    s.unit = [h, ops, sink, rng, batch](std::size_t i) {
      const std::span<const UpdateOp> chunk(ops->data() + (i * batch) % kInputElements, batch);
      *sink = h->hash_multiset(chunk, batch, rng.get());
    };
    return s;
  }
  throw ParameterError("unknown ECMH benchmark operation: " + spec.operation);
}

}  // namespace

SuiteSpec parse_suite_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t c = text.find(':', pos);
    parts.push_back(text.substr(pos, c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (parts.size() == 1 && parts[0] == "noop") return {"noop", "-", "noop", 1};
  if (parts.size() < 3 || parts.size() > 4) throw ParameterError("suite must be construction:param:operation[:batch], got " + text);
  SuiteSpec s{parts[0], parts[1], parts[2], 1};
  if (parts.size() == 4) {
    try {
      s.batch = std::stoul(parts[3]);
    } catch (const std::logic_error&) {
      throw ParameterError("bad batch size in suite " + text);
    }
  } else if (s.operation.rfind("batch", 0) == 0) {
    s.batch = Ecmh<1>::default_batch;
  }
  return s;
}

std::string to_string(const SuiteSpec& s) {
  return s.construction + ":" + s.param + ":" + s.operation + ":" + std::to_string(s.batch);
}

std::vector<SuiteSpec> default_suites() {
  const Registry& reg = Registry::instance();
  std::vector<SuiteSpec> out{{"noop", "-", "noop", 1}};
  for (const auto& c : reg.curve_names()) {
    out.push_back({"ecmh", c, "single", 1});
    out.push_back({"ecmh", c, "single_blinded", 1});
    out.push_back({"ecmh", c, "batch", Ecmh<1>::default_batch});
    out.push_back({"ecmh", c, "batch_blinded", Ecmh<1>::default_batch});
  }
  for (const auto& p : reg.muhash_names()) out.push_back({"muhash", p, "single", 1});
  for (const auto& n : reg.adhash_names()) out.push_back({"adhash", n, "single", 1});
  return out;
}

Suite make_suite(const SuiteSpec& spec) {
  if (spec.construction == "noop") {
    return Suite{"noop", "-", 0, "noop", 1, 1, [](std::size_t) { std::atomic_signal_fence(std::memory_order_seq_cst); }};
  }
  if (spec.construction == "ecmh") {
    const Registry& reg = Registry::instance();
    const unsigned m = reg.field(reg.curve(spec.param).field).degree;
    switch ((m + 63) / 64) {
      case 1: return ecmh_suite<1>(spec);
      case 2: return ecmh_suite<2>(spec);
      case 3: return ecmh_suite<3>(spec);
      case 4: return ecmh_suite<4>(spec);
      case 5: return ecmh_suite<5>(spec);
      default: throw Unsupported("no benchmark build for field degree " + std::to_string(m));
    }
  }
  if (spec.operation != "single" || spec.batch != 1) {
    throw ParameterError(spec.construction + " benchmarks support only single:1, got " + spec.operation);
  }
  auto inputs = random_inputs();
  if (spec.construction == "muhash") {
    auto h = std::make_shared<MuHash>(MuHash::from_registry(spec.param, Bytes(16, 0x5c)));
    auto st = std::make_shared<MuHash::State>(h->empty());
    return Suite{"muhash", spec.param, static_cast<double>(h->security_bits()), "single", 1, 1,
                 [h, st, inputs](std::size_t i) { h->insert(*st, (*inputs)[i % kInputElements]); }};
  }
  if (spec.construction == "adhash") {
    auto h = std::make_shared<AdHash>(AdHash::from_registry(spec.param, Bytes(16, 0x5c)));
    auto acc = std::make_shared<AdHash::Limbs>(h->empty());
    return Suite{"adhash", spec.param, security::adhash_set_security_bits(h->bits()), "single", 1, 1,
                 [h, acc, inputs](std::size_t i) { h->update(*acc, (*inputs)[i % kInputElements], 1); }};
  }
  throw ParameterError("unknown construction: " + spec.construction);
}

}  // namespace ecmh::bench
