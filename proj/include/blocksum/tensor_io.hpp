#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blocksum/exponent.hpp"
#include "blocksum/form_norm.hpp"
#include "blocksum/parse.hpp"
#include "blocksum/tensor.hpp"

namespace blocksum {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponents serialize as numbers, with "inf" as the string sentinel for the
// endpoint; fraction strings like "12/5" are accepted on input.
inline nlohmann::json exponent_to_json(Exponent e) {
  if (e.is_infinite()) return nlohmann::json("inf");
  return nlohmann::json(e.value());
}

inline Exponent exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  if (j.is_number()) return Exponent::from_value(j.get<double>());
  throw std::invalid_argument("exponent must be a number or \"inf\"");
}

inline nlohmann::json exponents_to_json(const ExponentVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Exponent& e : v) arr.push_back(exponent_to_json(e));
  return arr;
}

inline ExponentVector exponents_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("exponent list must be an array");
  ExponentVector out;
  for (const auto& e : j) out.push_back(exponent_from_json(e));
  return out;
}

// Shared tensor format:
//   {"order": m, "dims": [n_1, ..., n_m], "entries": [row-major reals]}
// Entries round-trip bit-exactly.
inline nlohmann::json tensor_to_json(const CoefficientTensor& t) {
  nlohmann::json j;
  j["order"] = t.order();
  j["dims"] = t.dims();
  j["entries"] = std::vector<double>(t.entries().begin(), t.entries().end());
  return j;
}

inline CoefficientTensor tensor_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("order") || !j.contains("dims") ||
      !j.contains("entries")) {
    throw std::invalid_argument(
        "tensor JSON needs \"order\", \"dims\" and \"entries\"");
  }
  const int order = j.at("order").get<int>();
  const std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  if (order != static_cast<int>(dims.size())) {
    throw std::invalid_argument(
        "tensor JSON: \"order\" does not match \"dims\" length");
  }
  std::vector<double> entries = j.at("entries").get<std::vector<double>>();
  return CoefficientTensor(dims, std::move(entries));
}

// A form is the shared tensor format plus {"p": [exponents]}.
inline nlohmann::json form_to_json(const FormInstance& A) {
  nlohmann::json j = tensor_to_json(A.tensor);
  j["p"] = exponents_to_json(A.domain);
  return j;
}

inline FormInstance form_from_json(const nlohmann::json& j) {
  CoefficientTensor t = tensor_from_json(j);
  if (!j.contains("p")) {
    throw std::invalid_argument("form JSON needs a \"p\" exponent list");
  }
  return FormInstance(std::move(t), exponents_from_json(j.at("p")));
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path.string() + ": " +
                                e.what());
  }
}

// Write-to-temp then atomic rename: validation failures upstream leave no
// partial output behind.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() +
                  ": " + ec.message());
  }
}

}  // namespace blocksum
