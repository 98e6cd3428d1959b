#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/holder.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/rng.hpp"
#include "blocksum/tensor.hpp"

namespace blocksum {

// m-linear form on l_{p_1}^{n_1} x ... x l_{p_m}^{n_m}, represented by its
// coefficient tensor on the canonical bases.
struct FormInstance {
  CoefficientTensor tensor;
  ExponentVector domain;

  FormInstance(CoefficientTensor t, ExponentVector p)
      : tensor(std::move(t)), domain(std::move(p)) {
    if (domain.size() != static_cast<std::size_t>(tensor.order())) {
      throw std::invalid_argument(
          "FormInstance: need one domain exponent per tensor axis");
    }
  }
};

enum class NormMethod { ascent, exact_sign, exact_closed };

inline const char* norm_method_name(NormMethod m) {
  switch (m) {
    case NormMethod::ascent: return "ascent";
    case NormMethod::exact_sign: return "exact-sign";
    case NormMethod::exact_closed: return "exact-closed";
  }
  return "?";
}

struct NormEstimate {
  double value = 0.0;
  std::vector<std::vector<double>> maximizer;  // one unit vector per slot
  NormMethod method = NormMethod::ascent;
  bool converged = false;
  int restarts_used = 0;
  int sweeps = 0;
};

namespace detail {

// contract the last axis of buf (shape dims) with v, in place
inline void contract_last(std::vector<double>& buf, std::vector<int>& dims,
                          std::span<const double> v) {
  const std::size_t len = static_cast<std::size_t>(dims.back());
  const std::size_t rows = buf.size() / len;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* b = buf.data() + r * len;
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) acc += b[j] * v[j];
    buf[r] = acc;
  }
  buf.resize(rows);
  dims.pop_back();
}

// contract the first axis of buf (shape dims) with v, in place
inline void contract_first(std::vector<double>& buf, std::vector<int>& dims,
                           std::span<const double> v) {
  const std::size_t len = static_cast<std::size_t>(dims.front());
  const std::size_t rest = buf.size() / len;
  std::vector<double> out(rest, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const double* b = buf.data() + i * rest;
    for (std::size_t s = 0; s < rest; ++s) out[s] += vi * b[s];
  }
  buf = std::move(out);
  dims.erase(dims.begin());
}

inline void check_slots(const FormInstance& A,
                        const std::vector<std::vector<double>>& xs) {
  if (xs.size() != static_cast<std::size_t>(A.tensor.order())) {
    throw std::invalid_argument("need one vector per slot");
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k].size() != static_cast<std::size_t>(A.tensor.dims()[k])) {
      throw std::invalid_argument("slot " + std::to_string(k + 1) +
                                  " has wrong dimension");
    }
  }
}

}  // namespace detail

// full contraction A(x_1, ..., x_m)
inline double evaluate(const FormInstance& A,
                       const std::vector<std::vector<double>>& xs) {
  detail::check_slots(A, xs);
  std::vector<double> buf(A.tensor.entries().begin(),
                          A.tensor.entries().end());
  std::vector<int> dims = A.tensor.dims();
  for (std::size_t k = xs.size(); k-- > 0;) {
    detail::contract_last(buf, dims, xs[k]);
  }
  return buf[0];
}

// coefficient vector of the linear functional obtained by fixing every slot
// except `slot`
inline std::vector<double> contract_all_but(
    const FormInstance& A, const std::vector<std::vector<double>>& xs,
    int slot) {
  detail::check_slots(A, xs);
  std::vector<double> buf(A.tensor.entries().begin(),
                          A.tensor.entries().end());
  std::vector<int> dims = A.tensor.dims();
  for (std::size_t k = xs.size(); k-- > static_cast<std::size_t>(slot) + 1;) {
    detail::contract_last(buf, dims, xs[k]);
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(slot); ++k) {
    detail::contract_first(buf, dims, xs[k]);
  }
  return buf;
}

struct AscentOptions {
  int restarts = 8;
  double tol = 1e-12;
  int max_iter = 500;
  std::uint64_t seed = 0;
  // invoked after every sweep of every restart; used by tests to audit the
  // monotone-ascent invariant
  std::function<void(int restart, int sweep, double objective)> observer;
};

// Alternating Holder-dual ascent. Each step replaces one slot by the exact
// maximizer of the induced linear functional on its l_p ball, so the
// objective never decreases and every intermediate value is a valid lower
// bound of ||A||. Restart 0 starts all slots at the normalized all-ones
// vector; the remaining restarts draw gaussian coordinates and project to
// the sphere.
inline NormEstimate norm_ascent(const FormInstance& A,
                                const AscentOptions& opt = {}) {
  if (opt.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (opt.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  const int m = A.tensor.order();
  const std::vector<int>& dims = A.tensor.dims();

  NormEstimate best;
  best.method = NormMethod::ascent;
  best.maximizer.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    best.maximizer[static_cast<std::size_t>(k)].assign(
        static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]), 0.0);
    best.maximizer[static_cast<std::size_t>(k)][0] = 1.0;
  }

  bool all_zero = true;
  for (double v : A.tensor.entries()) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    best.converged = true;
    return best;
  }

  best.value = -1.0;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(m));
    if (restart == 0) {
      for (int k = 0; k < m; ++k) {
        xs[static_cast<std::size_t>(k)].assign(
            static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]), 1.0);
        project_to_sphere(xs[static_cast<std::size_t>(k)],
                          A.domain[static_cast<std::size_t>(k)]);
      }
    } else {
      CounterRng rng(CounterRng::mix(
          {opt.seed, static_cast<std::uint64_t>(restart), 0xA5CE57ULL}));
      for (int k = 0; k < m; ++k) {
        auto& x = xs[static_cast<std::size_t>(k)];
        x.assign(static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]),
                 0.0);
        for (double& v : x) v = rng.gaussian();
        if (!project_to_sphere(x, A.domain[static_cast<std::size_t>(k)])) {
          x[0] = 1.0;
        }
      }
    }

    double obj = std::abs(evaluate(A, xs));
    double prev = -1.0;
    bool converged = false;
    int sweeps = 0;
    for (int sweep = 1; sweep <= opt.max_iter; ++sweep) {
      sweeps = sweep;
      for (int k = 0; k < m; ++k) {
        const std::vector<double> c = contract_all_but(A, xs, k);
        const HolderArgmax step =
            holder_argmax(c, A.domain[static_cast<std::size_t>(k)]);
        if (step.degenerate) continue;  // keep the previous slot value
        xs[static_cast<std::size_t>(k)] = step.x;
        obj = step.value;
      }
      if (opt.observer) opt.observer(restart, sweep, obj);
      if (sweep > 1 && obj - prev < opt.tol * std::max(1.0, obj)) {
        converged = true;
        break;
      }
      prev = obj;
    }

    const double certified = evaluate(A, xs);
    if (certified > best.value) {
      best.value = certified;
      best.maximizer = std::move(xs);
      best.converged = converged;
      best.sweeps = sweeps;
    }
  }
  best.restarts_used = opt.restarts;
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

// number of sign bits an exact enumeration would need
inline int sign_enum_bits(const FormInstance& A) {
  int bits = 0;
  for (int k = 0; k + 1 < A.tensor.order(); ++k) {
    bits += A.tensor.dims()[static_cast<std::size_t>(k)];
  }
  return bits;
}

struct SignEnumOptions {
  int budget_bits = 24;
};

// Exact norm for forms on products of sup-norm balls: a multilinear form
// attains its maximum at extreme points, i.e. at sign vectors, so slots
// 1..m-1 are enumerated and the last slot is solved in closed form. The
// first coordinate of slot 1 is pinned to +1 (a global sign flip leaves the
// objective unchanged), which halves the enumeration.
inline NormEstimate exact_norm_signs(const FormInstance& A,
                                     const SignEnumOptions& opt = {}) {
  const int m = A.tensor.order();
  for (const Exponent& p : A.domain) {
    if (!p.is_infinite()) {
      throw std::invalid_argument(
          "exact_norm_signs requires every domain exponent to be inf");
    }
  }
  const int bits = sign_enum_bits(A);
  if (bits > opt.budget_bits) {
    throw std::invalid_argument(
        "sign enumeration needs " + std::to_string(bits) +
        " bits, over the budget of " + std::to_string(opt.budget_bits) +
        "; use norm_ascent instead");
  }

  std::vector<std::vector<double>> xs(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    xs[static_cast<std::size_t>(k)].assign(
        static_cast<std::size_t>(A.tensor.dims()[static_cast<std::size_t>(k)]),
        1.0);
  }

  NormEstimate best;
  best.method = NormMethod::exact_sign;
  best.converged = true;
  best.value = -1.0;

  const int free_bits = bits > 0 ? bits - 1 : 0;  // slot-1 lead sign pinned
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (int k = 0; k + 1 < m; ++k) {
      auto& x = xs[static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (k == 0 && j == 0) {
          x[j] = 1.0;
          continue;
        }
        x[j] = (c & 1U) ? -1.0 : 1.0;
        c >>= 1;
      }
    }
    const std::vector<double> coef = contract_all_but(A, xs, m - 1);
    const HolderArgmax last = holder_argmax(coef, Exponent::infinity());
    if (last.value > best.value) {
      best.value = last.value;
      best.maximizer = xs;
      best.maximizer[static_cast<std::size_t>(m - 1)] = last.x;
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

// How sweep rows and the CLI pick their estimator: the exact sign
// enumeration when the domain is all-inf and fits the budget, the ascent
// otherwise.
struct NormConfig {
  int restarts = 20;
  double tol = 1e-12;
  int max_iter = 500;
  std::uint64_t seed = 0;
  bool prefer_exact = true;
  int exact_budget_bits = 24;
};

inline NormEstimate estimate_norm(const FormInstance& A,
                                  const NormConfig& cfg = {}) {
  bool all_inf = true;
  for (const Exponent& p : A.domain) {
    if (!p.is_infinite()) {
      all_inf = false;
      break;
    }
  }
  if (cfg.prefer_exact && all_inf &&
      sign_enum_bits(A) <= cfg.exact_budget_bits) {
    return exact_norm_signs(A, SignEnumOptions{cfg.exact_budget_bits});
  }
  AscentOptions opt;
  opt.restarts = cfg.restarts;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.seed = cfg.seed;
  return norm_ascent(A, opt);
}

}  // namespace blocksum
