#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ecmh/curve/binary_curve.hpp"
#include "ecmh/encoding/sw_encoder.hpp"
#include "ecmh/field/binary_field.hpp"
#include "ecmh/registry.hpp"

namespace test_support {

using F13 = ecmh::BinaryField<1>;
using F163 = ecmh::BinaryField<3>;
using F233 = ecmh::BinaryField<4>;

inline const F13& gf13() {
  static const F13 f(ecmh::Registry::instance().field("gf2_13"));
  return f;
}
inline const F163& gf163() {
  static const F163 f(ecmh::Registry::instance().field("gf2_163"));
  return f;
}
inline const F233& gf233() {
  static const F233 f(ecmh::Registry::instance().field("gf2_233"));
  return f;
}

using C13 = ecmh::BinaryCurve<1>;
using C163 = ecmh::BinaryCurve<3>;
using C233 = ecmh::BinaryCurve<4>;

template <class Curve>
const std::shared_ptr<const Curve>& shared_curve(const char* name) {
  static const auto c = std::make_shared<const Curve>(Curve::from_registry(name));
  return c;
}
inline const C13& toy13() { return *shared_curve<C13>("toy13"); }
inline const C163& sect163k1() { return *shared_curve<C163>("sect163k1"); }
inline const C233& sect233k1() { return *shared_curve<C233>("sect233k1"); }

using E13 = ecmh::SwEncoder<1>;
using E163 = ecmh::SwEncoder<3>;
using E233 = ecmh::SwEncoder<4>;

inline const E13& enc13() {
  static const E13 e = E13::for_registry_curve(shared_curve<C13>("toy13"));
  return e;
}
inline const E163& enc163() {
  static const E163 e = E163::for_registry_curve(shared_curve<C163>("sect163k1"));
  return e;
}
inline const E233& enc233() {
  static const E233 e = E233::for_registry_curve(shared_curve<C233>("sect233k1"));
  return e;
}

inline std::string data_path(const std::string& rel) { return std::string(ECMH_TEST_DATA_DIR) + "/" + rel; }

inline std::vector<std::vector<std::string>> read_rows(const std::string& rel) {
  std::ifstream in(data_path(rel));
  if (!in) throw std::runtime_error("missing test data " + rel);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> row;
    for (std::string tok; ss >> tok;) row.push_back(tok);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace test_support
