#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ecmh/field/binary_field.hpp"

namespace ecmh {

/// Curve entry as stored in the registry; coefficients are field hex strings
/// and the orders are hex integers.
struct CurveRecord {
  std::string name;
  std::string field;
  std::string a;
  std::string b;
  std::string order;
  unsigned cofactor = 0;
  std::string subgroup_order;
  std::string encoder_t;
};

struct MuHashRecord {
  std::string name;
  std::string p;  // hex
  unsigned security_bits = 0;
};

struct AdHashRecord {
  std::string name;
  unsigned bits = 0;
};

/// The parameter registry: named fields, curves and baseline moduli.
///
/// The copy of params/registry.json compiled into the library is used unless
/// ECMH_PARAM_DIR names a directory holding another registry.json.
class Registry {
 public:
  /// Parses registry JSON text; throws ParameterError on malformed content.
  static Registry parse(const std::string& json_text);
  static Registry load_file(const std::string& path);
  /// Embedded registry or the ECMH_PARAM_DIR override, loaded once.
  static const Registry& instance();

  const FieldParams& field(const std::string& name) const;
  const CurveRecord& curve(const std::string& name) const;
  const MuHashRecord& muhash(const std::string& name) const;
  /// Registered n<bits> names, and any other well-formed n<bits> name.
  AdHashRecord adhash(const std::string& name) const;

  std::vector<std::string> curve_names() const;
  std::vector<std::string> muhash_names() const;
  std::vector<std::string> adhash_names() const;

 private:
  std::map<std::string, FieldParams> fields_;
  std::map<std::string, CurveRecord> curves_;
  std::map<std::string, MuHashRecord> muhash_;
  std::map<std::string, AdHashRecord> adhash_;
};

}  // namespace ecmh
