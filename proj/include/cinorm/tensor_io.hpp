#pragma once
// JSON serialization for tensors, Boolean/real functions, and rationals.
//
// Tensor document:   {"shape": [2,2], "entries": ["1","-1","-1","1"]}
// Sign-compact form: {"shape": [2,2], "entries": "+--+"}   (+ is 1, - is -1)
// Function document: {"name": "OR", "m": 3}            (builtin by name)
//                    {"name": "DISJ", "m": 4, "k": 2}  (m = bits per player)
//                    {"m": 2, "table": "+---"}          (explicit table)
//                    {"m": 1, "table": ["1","-1"]}      (rational values)

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "boolfun.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "tensor.hpp"

namespace cinorm {

using Json = nlohmann::json;

inline Json rational_to_json(const Rat& q) { return Json(rational_text(q)); }

inline Rat rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ValidationError("expected a rational as a string or integer");
}

inline Json tensor_to_json(const RationalTensor& t) {
  Json j;
  j["shape"] = t.shape().dims();
  if (t.is_sign()) {
    std::string s;
    s.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back(t[i] > 0 ? '+' : '-');
    j["entries"] = s;
  } else {
    Json arr = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) arr.push_back(rational_text(t[i]));
    j["entries"] = arr;
  }
  return j;
}

inline RationalTensor tensor_from_json(const Json& j, std::size_t size_cap = kDefaultSizeCap) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("entries"))
    throw ValidationError("tensor document needs 'shape' and 'entries'");
  std::vector<std::size_t> dims;
  for (const Json& d : j.at("shape")) {
    if (!d.is_number_integer() || d.get<long long>() < 1)
      throw ValidationError("tensor shape entries must be positive integers");
    dims.push_back(static_cast<std::size_t>(d.get<long long>()));
  }
  Shape shape(dims, size_cap);
  const Json& e = j.at("entries");
  std::vector<Rat> entries;
  entries.reserve(shape.size());
  if (e.is_string()) {
    const std::string& s = e.get_ref<const std::string&>();
    for (char c : s) {
      if (c == '+')
        entries.emplace_back(1);
      else if (c == '-')
        entries.emplace_back(-1);
      else
        throw ValidationError("sign-compact entries may contain only '+' and '-'");
    }
  } else if (e.is_array()) {
    for (const Json& v : e) entries.push_back(rational_from_json(v));
  } else {
    throw ValidationError("tensor entries must be a string or an array");
  }
  return RationalTensor(shape, std::move(entries));
}

inline Json function_to_json(const BooleanFunction& f) {
  Json j;
  j["m"] = f.arity;
  std::string s;
  s.reserve(f.table.size());
  for (int8_t v : f.table) s.push_back(v > 0 ? '+' : '-');
  j["table"] = s;
  return j;
}

inline BooleanFunction function_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("function document must be an object");
  if (j.contains("name")) {
    if (!j.contains("m")) throw ValidationError("builtin function needs 'm'");
    const std::size_t m = j.at("m").get<std::size_t>();
    const std::size_t k = j.contains("k") ? j.at("k").get<std::size_t>() : 0;
    return builtin_function(j.at("name").get<std::string>(), m, k);
  }
  if (!j.contains("m") || !j.contains("table"))
    throw ValidationError("function document needs 'name' or 'm' plus 'table'");
  const std::size_t m = j.at("m").get<std::size_t>();
  if (m > kMaxArity) throw ValidationError("function arity exceeds the supported maximum");
  const Json& tab = j.at("table");
  std::vector<int8_t> table;
  if (tab.is_string()) {
    for (char c : tab.get_ref<const std::string&>()) {
      if (c == '+')
        table.push_back(1);
      else if (c == '-')
        table.push_back(-1);
      else
        throw ValidationError("function table string may contain only '+' and '-'");
    }
  } else if (tab.is_array()) {
    for (const Json& v : tab) {
      Rat q = rational_from_json(v);
      if (q == 1)
        table.push_back(1);
      else if (q == -1)
        table.push_back(-1);
      else
        throw ValidationError("function table values must be 1 or -1");
    }
  } else {
    throw ValidationError("function table must be a string or an array");
  }
  if (table.size() != (std::size_t{1} << m))
    throw ValidationError("function table size must be 2^m");
  return BooleanFunction{m, std::move(table)};
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cinorm
