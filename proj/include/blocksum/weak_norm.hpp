#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/holder.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/rng.hpp"

namespace blocksum {

// Finite sequence of L vectors in l_p^n, stored as the rows of an L x n
// array.
struct VectorSequence {
  int length = 0;
  int dim = 0;
  Exponent ambient;  // the p of the ambient l_p^n
  std::vector<double> data;

  VectorSequence(int L, int n, Exponent p)
      : length(L), dim(n), ambient(p),
        data(static_cast<std::size_t>(L) * static_cast<std::size_t>(n), 0.0) {
    if (L < 1 || n < 1) {
      throw std::invalid_argument("VectorSequence: L and n must be >= 1");
    }
  }

  VectorSequence(int L, int n, Exponent p, std::vector<double> d)
      : length(L), dim(n), ambient(p), data(std::move(d)) {
    if (L < 1 || n < 1) {
      throw std::invalid_argument("VectorSequence: L and n must be >= 1");
    }
    if (data.size() !=
        static_cast<std::size_t>(L) * static_cast<std::size_t>(n)) {
      throw std::invalid_argument("VectorSequence: data size mismatch");
    }
    for (double v : data) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("VectorSequence: entries must be finite");
      }
    }
  }

  std::span<const double> row(int i) const {
    return std::span<const double>(
        data.data() + static_cast<std::size_t>(i) * dim,
        static_cast<std::size_t>(dim));
  }
  std::span<double> row(int i) {
    return std::span<double>(data.data() + static_cast<std::size_t>(i) * dim,
                             static_cast<std::size_t>(dim));
  }

  static VectorSequence canonical_basis(int n, Exponent p) {
    VectorSequence s(n, n, p);
    for (int i = 0; i < n; ++i) s.row(i)[static_cast<std::size_t>(i)] = 1.0;
    return s;
  }
};

struct WeakNormOptions {
  int restarts = 8;
  double tol = 1e-12;
  int max_iter = 500;
  std::uint64_t seed = 0;
};

struct WeakNormResult {
  double value = 0.0;
  std::vector<double> maximizer;  // in the dual unit ball
  bool converged = true;
  int restarts_used = 0;
};

namespace detail {

inline std::vector<double> pairings(const VectorSequence& x,
                                    std::span<const double> y) {
  std::vector<double> z(static_cast<std::size_t>(x.length), 0.0);
  for (int i = 0; i < x.length; ++i) {
    const std::span<const double> r = x.row(i);
    double acc = 0.0;
    for (int j = 0; j < x.dim; ++j) acc += r[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    z[static_cast<std::size_t>(i)] = acc;
  }
  return z;
}

// gradient direction of ||z||_w pulled back through the rows of x;
// scale-free, since the argmax step only needs the direction
inline std::vector<double> dual_gradient(const VectorSequence& x,
                                         std::span<const double> z, double w) {
  std::vector<double> psi(z.size(), 0.0);
  double zpeak = 0.0;
  std::size_t zarg = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]);
    if (a > zpeak) {
      zpeak = a;
      zarg = i;
    }
  }
  if (zpeak > 0.0) {
    if (std::isinf(w)) {
      psi[zarg] = sign_pos(z[zarg]);
    } else {
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0.0) continue;
        psi[i] = sign_pos(z[i]) * std::pow(std::abs(z[i]) / zpeak, w - 1.0);
      }
    }
  }
  std::vector<double> g(static_cast<std::size_t>(x.dim), 0.0);
  for (int i = 0; i < x.length; ++i) {
    const double pi = psi[static_cast<std::size_t>(i)];
    if (pi == 0.0) continue;
    const std::span<const double> r = x.row(i);
    for (int j = 0; j < x.dim; ++j) {
      g[static_cast<std::size_t>(j)] += pi * r[static_cast<std::size_t>(j)];
    }
  }
  return g;
}

}  // namespace detail

// ||x||_{w,p} = sup over the unit ball of the dual l_{p*}^n of the l_w norm
// of the pairings (y . x_i)_{i<L}. Computed by projected dual-gradient ascent
// with multi-start: restart 0 starts at a leading singular-direction
// surrogate, the rest at random points on the dual sphere. The returned value
// is the objective at a feasible point, hence a certified lower bound; a
// restart that exhausts its iteration budget is reported through the flag,
// never as an error.
inline WeakNormResult weak_norm(const VectorSequence& x, Exponent w,
                                const WeakNormOptions& opt = {}) {
  if (opt.restarts < 1 || opt.max_iter < 1 || !(opt.tol > 0.0)) {
    throw std::invalid_argument("weak_norm: bad options");
  }
  const Exponent dual = x.ambient.conjugate();
  const double wv = w.value();
  const std::size_t n = static_cast<std::size_t>(x.dim);

  bool all_zero = true;
  for (double v : x.data) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  WeakNormResult best;
  best.maximizer.assign(n, 0.0);
  best.maximizer[0] = 1.0;
  if (all_zero) return best;

  const auto objective = [&](const std::vector<double>& y) {
    const std::vector<double> z = detail::pairings(x, y);
    return lp_reduce(std::span<const double>(z.data(), z.size()), wv);
  };

  best.value = -1.0;
  best.converged = false;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::vector<double> y(n, 0.0);
    if (restart == 0) {
      // 2-norm power iterations as a starting surrogate
      std::vector<double> v(n, 1.0);
      for (int it = 0; it < 30; ++it) {
        const std::vector<double> z = detail::pairings(x, v);
        std::vector<double> nv(n, 0.0);
        for (int i = 0; i < x.length; ++i) {
          const std::span<const double> r = x.row(i);
          for (std::size_t j = 0; j < n; ++j) {
            nv[j] += z[static_cast<std::size_t>(i)] * r[j];
          }
        }
        if (!project_to_sphere(nv, Exponent::two())) break;
        v = std::move(nv);
      }
      y = std::move(v);
      if (!project_to_sphere(y, dual)) {
        y.assign(n, 0.0);
        y[0] = 1.0;
      }
    } else {
      CounterRng rng(CounterRng::mix(
          {opt.seed, static_cast<std::uint64_t>(restart), 0x77EACULL}));
      for (double& v : y) v = rng.gaussian();
      if (!project_to_sphere(y, dual)) {
        y.assign(n, 0.0);
        y[0] = 1.0;
      }
    }

    double val = objective(y);
    bool converged = false;
    for (int it = 0; it < opt.max_iter; ++it) {
      const std::vector<double> z = detail::pairings(x, y);
      const std::vector<double> g = detail::dual_gradient(x, z, wv);
      const HolderArgmax step = holder_argmax(g, dual);
      if (step.degenerate) {
        converged = true;  // stagnation: no ascent direction
        break;
      }
      const double nval = objective(step.x);
      const double gain = nval - val;
      y = step.x;
      if (nval > val) val = nval;
      if (gain < opt.tol * std::max(1.0, val)) {
        converged = true;
        break;
      }
    }
    if (val > best.value) {
      best.value = val;
      best.maximizer = y;
      best.converged = converged;
    }
  }
  best.restarts_used = opt.restarts;
  // certify at the feasible point actually returned
  best.value = objective(best.maximizer);
  return best;
}

}  // namespace blocksum
