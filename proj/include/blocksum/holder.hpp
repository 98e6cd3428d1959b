#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/numeric.hpp"

namespace blocksum {

struct HolderArgmax {
  std::vector<double> x;      // on the l_p unit sphere
  double value = 0.0;         // <c, x> = ||c||_{p*}
  bool degenerate = false;    // c was the zero vector
};

// Exact maximizer of <c, x> over the unit ball of l_p; the attained value is
// the dual norm ||c||_{p*}.
//   1 < p < inf : x_i = sign(c_i) |c_i|^{p*-1} / ||c||_{p*}^{p*-1}
//   p = inf     : x = sign(c), with sign(0) := +1
//   p = 1       : the signed basis vector at the smallest index of max |c_i|
// c = 0 returns (e_1, 0) flagged degenerate.
inline HolderArgmax holder_argmax(std::span<const double> c, Exponent p) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("holder_argmax: empty vector");
  HolderArgmax out;
  out.x.assign(n, 0.0);

  double peak = 0.0;
  std::size_t peak_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(c[i]);
    if (a > peak) {
      peak = a;
      peak_i = i;
    }
  }
  if (peak == 0.0) {
    out.x[0] = 1.0;  // unit in every l_p
    out.degenerate = true;
    return out;
  }

  if (p.is_infinite()) {
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] = sign_pos(c[i]);
      acc.add(std::abs(c[i]));
    }
    out.value = acc.value();
    return out;
  }
  if (p.value() == 1.0) {
    out.x[peak_i] = sign_pos(c[peak_i]);
    out.value = peak;
    return out;
  }

  const Exponent ps = p.conjugate();
  const double t = ps.value() - 1.0;  // finite since p > 1
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i] == 0.0) continue;
    out.x[i] = sign_pos(c[i]) * std::pow(std::abs(c[i]) / peak, t);
  }
  const double nrm = lp_reduce(out.x, p.value());
  for (double& v : out.x) v /= nrm;
  out.value = lp_reduce(c, ps.value());
  return out;
}

inline HolderArgmax holder_argmax(const std::vector<double>& c, Exponent p) {
  return holder_argmax(std::span<const double>(c.data(), c.size()), p);
}

// normalize v onto the l_p unit sphere; returns false when v = 0
inline bool project_to_sphere(std::vector<double>& v, Exponent p) {
  const double nrm = lp_reduce(std::span<const double>(v.data(), v.size()),
                               p.value());
  if (nrm == 0.0) return false;
  for (double& x : v) x /= nrm;
  return true;
}

}  // namespace blocksum
