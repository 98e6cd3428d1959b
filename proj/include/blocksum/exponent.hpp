#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blocksum {

// Slack for hypothesis checks stated as strict inequalities. User-entered
// rationals like 4/3 are not exact in binary floating point.
inline constexpr double kHypothesisSlack = 1e-12;

// Extended exponent in [1, inf]. Stored as the reciprocal 1/p, so the
// endpoint conventions are exact: 1/inf == 0, and conjugation is the affine
// map 1/p -> 1 - 1/p. All exponent arithmetic in this library happens on
// reciprocals; conversion back to values occurs only at the boundary.
class Exponent {
 public:
  Exponent() = default;  // p = 1
  explicit Exponent(double p) { *this = from_value(p); }

  static Exponent from_value(double p) {
    if (std::isnan(p) || p < 1.0) {
      throw std::invalid_argument("exponent must lie in [1, inf], got " +
                                  std::to_string(p));
    }
    Exponent e;
    e.recip_ = std::isinf(p) ? 0.0 : 1.0 / p;
    return e;
  }

  static Exponent from_reciprocal(double r) {
    if (std::isnan(r) || r < 0.0 || r > 1.0) {
      throw std::invalid_argument(
          "exponent reciprocal must lie in [0, 1], got " + std::to_string(r));
    }
    Exponent e;
    e.recip_ = r;
    return e;
  }

  static Exponent infinity() { return from_reciprocal(0.0); }
  static Exponent one() { return from_reciprocal(1.0); }
  static Exponent two() { return from_reciprocal(0.5); }

  double value() const {
    return recip_ == 0.0 ? std::numeric_limits<double>::infinity()
                         : 1.0 / recip_;
  }
  double reciprocal() const { return recip_; }
  bool is_infinite() const { return recip_ == 0.0; }

  // 1/p + 1/p* = 1; endpoints map exactly (1 <-> inf)
  Exponent conjugate() const {
    Exponent e;
    e.recip_ = 1.0 - recip_;
    return e;
  }

  friend bool operator==(Exponent a, Exponent b) {
    return a.recip_ == b.recip_;
  }
  friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }
  // ordered by value, so larger exponent means smaller reciprocal
  friend bool operator<(Exponent a, Exponent b) { return a.recip_ > b.recip_; }
  friend bool operator>(Exponent a, Exponent b) { return b < a; }
  friend bool operator<=(Exponent a, Exponent b) { return !(b < a); }
  friend bool operator>=(Exponent a, Exponent b) { return !(a < b); }

 private:
  double recip_ = 1.0;
};

inline Exponent conjugate(Exponent p) { return p.conjugate(); }

using ExponentVector = std::vector<Exponent>;

inline ExponentVector exponents(std::initializer_list<double> values) {
  ExponentVector out;
  out.reserve(values.size());
  for (double v : values) out.push_back(Exponent::from_value(v));
  return out;
}

inline ExponentVector uniform_exponents(std::size_t m, Exponent p) {
  return ExponentVector(m, p);
}

// sum_{j in axes} 1/p_j with 1/inf = 0; axes are 0-based
inline double harmonic_sum(const ExponentVector& p, std::span<const int> axes) {
  double s = 0.0;
  for (int j : axes) {
    if (j < 0 || static_cast<std::size_t>(j) >= p.size()) {
      throw std::out_of_range("harmonic_sum: axis " + std::to_string(j) +
                              " out of range for m = " +
                              std::to_string(p.size()));
    }
    s += p[static_cast<std::size_t>(j)].reciprocal();
  }
  return s;
}

inline double harmonic_sum(const ExponentVector& p,
                           const std::vector<int>& axes) {
  return harmonic_sum(p, std::span<const int>(axes.data(), axes.size()));
}

inline double harmonic_sum(const ExponentVector& p) {
  double s = 0.0;
  for (const Exponent& e : p) s += e.reciprocal();
  return s;
}

}  // namespace blocksum
