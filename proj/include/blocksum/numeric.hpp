#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blocksum {

// Compensated (Kahan) accumulator. Nested norm evaluations raise partial
// sums to exponent ratios, which amplifies per-level rounding, so every
// reduction in this project goes through one of these.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// sign with sign(0) := +1, so tie handling is deterministic
inline double sign_pos(double v) { return v < 0.0 ? -1.0 : 1.0; }

// l_s reduction of |values|, scaled by the peak entry before exponentiation.
// s may be +infinity (supremum). Zero entries contribute exactly 0.
inline double lp_reduce(std::span<const double> values, double s) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  if (std::isinf(s)) return peak;
  if (s == 1.0) {
    KahanSum acc;
    for (double v : values) acc.add(std::abs(v));
    return acc.value();
  }
  KahanSum acc;
  for (double v : values) {
    if (v == 0.0) continue;
    acc.add(std::pow(std::abs(v) / peak, s));
  }
  return peak * std::pow(acc.value(), 1.0 / s);
}

inline double lp_reduce(const std::vector<double>& values, double s) {
  return lp_reduce(std::span<const double>(values.data(), values.size()), s);
}

// 17 significant digits: enough to reproduce any double bit-exactly
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// shortest decimal that round-trips
inline std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace blocksum
