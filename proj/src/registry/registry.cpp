#include "ecmh/registry.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecmh/error.hpp"
#include "json.hpp"

namespace ecmh {

extern const char* const kEmbeddedRegistry;

namespace {

using nlohmann::json;

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParameterError(where + ": missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(where + ": bad '" + key + "': " + e.what());
  }
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

}  // namespace

Registry Registry::parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("registry is not valid JSON: ") + e.what());
  }
  Registry reg;
  for (const auto& [name, f] : section(doc, "fields").items()) {
    FieldParams p;
    p.name = name;
    const std::string where = "field " + name;
    p.degree = required<unsigned>(f, "degree", where);
    p.reduction_terms = required<std::vector<unsigned>>(f, "reduction_terms", where);
    p.inversion_chain = required<std::vector<unsigned>>(f, "inversion_chain", where);
    p.table_multi_squares = f.value("table_multi_squares", std::vector<unsigned>{});
    p.table_block_bits = f.value("table_block_bits", 8u);
    reg.fields_.emplace(name, std::move(p));
  }
  for (const auto& [name, c] : section(doc, "curves").items()) {
    const std::string where = "curve " + name;
    CurveRecord r;
    r.name = name;
    r.field = required<std::string>(c, "field", where);
    if (!reg.fields_.count(r.field)) throw ParameterError(where + ": unknown field " + r.field);
    r.a = required<std::string>(c, "a", where);
    r.b = required<std::string>(c, "b", where);
    r.order = required<std::string>(c, "order", where);
    r.cofactor = required<unsigned>(c, "cofactor", where);
    r.subgroup_order = required<std::string>(c, "subgroup_order", where);
    r.encoder_t = c.value("encoder_t", std::string("2"));
    reg.curves_.emplace(name, std::move(r));
  }
  for (const auto& [name, m] : section(doc, "muhash").items()) {
    if (!m.is_object()) continue;
    const std::string where = "muhash " + name;
    reg.muhash_.emplace(name, MuHashRecord{name, required<std::string>(m, "p", where),
                                           required<unsigned>(m, "security_bits", where)});
  }
  for (const auto& [name, a] : section(doc, "adhash").items()) {
    if (!a.is_object()) continue;
    reg.adhash_.emplace(name, AdHashRecord{name, required<unsigned>(a, "bits", "adhash " + name)});
  }
  return reg;
}

Registry Registry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open registry " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Registry& Registry::instance() {
  static const Registry reg = [] {
    if (const char* dir = std::getenv("ECMH_PARAM_DIR"); dir != nullptr && *dir != '\0') {
      return load_file(std::string(dir) + "/registry.json");
    }
    return parse(kEmbeddedRegistry);
  }();
  return reg;
}

const FieldParams& Registry::field(const std::string& name) const {
  const auto it = fields_.find(name);
  if (it == fields_.end()) throw ParameterError("unknown field: " + name);
  return it->second;
}

const CurveRecord& Registry::curve(const std::string& name) const {
  const auto it = curves_.find(name);
  if (it == curves_.end()) throw ParameterError("unknown curve: " + name);
  return it->second;
}

const MuHashRecord& Registry::muhash(const std::string& name) const {
  const auto it = muhash_.find(name);
  if (it == muhash_.end()) throw ParameterError("unknown MuHash modulus: " + name);
  return it->second;
}

AdHashRecord Registry::adhash(const std::string& name) const {
  if (const auto it = adhash_.find(name); it != adhash_.end()) return it->second;
  if (name.size() >= 2 && name[0] == 'n' && name.find_first_not_of("0123456789", 1) == std::string::npos &&
      name.size() <= 7) {
    const unsigned bits = static_cast<unsigned>(std::stoul(name.substr(1)));
    if (bits >= 8 && bits % 8 == 0) return {name, bits};
  }
  throw ParameterError("unknown AdHash size: " + name + " (expected n<bits>, bits a multiple of 8, >= 8)");
}

namespace {
template <class Map>
std::vector<std::string> keys(const Map& m) {
  std::vector<std::string> out;
  for (const auto& kv : m) out.push_back(kv.first);
  return out;
}
}  // namespace

std::vector<std::string> Registry::curve_names() const { return keys(curves_); }
std::vector<std::string> Registry::muhash_names() const { return keys(muhash_); }
std::vector<std::string> Registry::adhash_names() const { return keys(adhash_); }

}  // namespace ecmh
