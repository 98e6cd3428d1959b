#pragma once

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/partition.hpp"

namespace blocksum {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_double(std::string_view tok) {
  const std::string_view t = trim(tok);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw std::invalid_argument("cannot parse number '" + std::string(tok) +
                                "'");
  }
  return v;
}

}  // namespace detail

// Accepts decimals, the literal "inf", and fractions like "12/5".
inline Exponent parse_exponent(std::string_view tok) {
  const std::string_view t = detail::trim(tok);
  if (t.empty()) throw std::invalid_argument("empty exponent");
  if (t == "inf" || t == "Inf" || t == "INF" || t == "infinity") {
    return Exponent::infinity();
  }
  const std::size_t slash = t.find('/');
  if (slash != std::string_view::npos) {
    const double num = detail::parse_double(t.substr(0, slash));
    const double den = detail::parse_double(t.substr(slash + 1));
    if (den == 0.0) {
      throw std::invalid_argument("zero denominator in '" + std::string(tok) +
                                  "'");
    }
    return Exponent::from_value(num / den);
  }
  return Exponent::from_value(detail::parse_double(t));
}

inline ExponentVector parse_exponent_list(std::string_view list) {
  ExponentVector out;
  for (std::string_view tok : detail::split(list, ',')) {
    out.push_back(parse_exponent(tok));
  }
  return out;
}

inline std::string render_exponent(Exponent e) {
  return e.is_infinite() ? "inf" : format_shortest(e.value());
}

inline std::string render_exponent_list(const ExponentVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += render_exponent(v[i]);
  }
  return out;
}

inline std::vector<int> parse_int_list(std::string_view list) {
  std::vector<int> out;
  for (std::string_view tok : detail::split(list, ',')) {
    const std::string_view t = detail::trim(tok);
    int v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw std::invalid_argument("cannot parse integer '" + std::string(tok) +
                                  "'");
    }
    out.push_back(v);
  }
  return out;
}

inline std::string render_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// Partition grammar: blocks separated by '|', 1-based axis indices separated
// by ','. "1,2|3" means I_1 = {1,2}, I_2 = {3}. Disjointness and coverage
// are validated; block order is preserved.
inline BlockPartition parse_partition(std::string_view spec,
                                      int expected_m = -1) {
  std::vector<std::vector<int>> blocks;
  int count = 0;
  for (std::string_view blk : detail::split(spec, '|')) {
    std::vector<int> axes;
    for (std::string_view tok : detail::split(blk, ',')) {
      const std::string_view t = detail::trim(tok);
      int v = 0;
      const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw std::invalid_argument("cannot parse partition index '" +
                                    std::string(tok) + "'");
      }
      axes.push_back(v - 1);  // to 0-based
      ++count;
    }
    blocks.push_back(std::move(axes));
  }
  const int m = expected_m >= 0 ? expected_m : count;
  return BlockPartition(m, std::move(blocks));
}

inline std::string render_partition(const BlockPartition& part) {
  std::string out;
  for (int k = 0; k < part.d(); ++k) {
    if (k) out += '|';
    const std::vector<int>& block = part.block(k);
    for (std::size_t a = 0; a < block.size(); ++a) {
      if (a) out += ',';
      out += std::to_string(block[a] + 1);  // to 1-based
    }
  }
  return out;
}

}  // namespace blocksum
