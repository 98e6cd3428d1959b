#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/partition.hpp"

namespace blocksum {

// Result of the block inclusion-exponent system. `hypothesis` records which
// admissibility clause held: 'A' (q_j >= p_j everywhere and positive balance)
// or 'B' (q_1 > p_1 strictly, zero balance). Under 'B' the first exponent is
// always degenerate (1/s_1 = 0) and the computation throws, so successful
// calls always report 'A'; the field exists so callers can echo the check.
struct InclusionResult {
  ExponentVector s;
  char hypothesis = 'A';
  double balance = 0.0;  // 1/r - |1/p| + |1/q|
};

// Solves 1/s_k = 1/r - |1/p|_{tail k} + |1/q|_{tail k} over the blocks of
// `part`, where "tail k" is I_k u ... u I_d. Guarantees s_1 >= ... >= s_d >= r
// for admissible inputs.
inline InclusionResult inclusion_exponents(Exponent r, const ExponentVector& p,
                                           const ExponentVector& q,
                                           const BlockPartition& part,
                                           double slack = kHypothesisSlack) {
  const std::size_t m = static_cast<std::size_t>(part.m());
  if (p.size() != m || q.size() != m) {
    throw std::invalid_argument(
        "inclusion_exponents: p and q must have one entry per axis of the "
        "partition");
  }
  // q_j >= p_j  <=>  1/q_j <= 1/p_j
  for (std::size_t j = 0; j < m; ++j) {
    if (q[j].reciprocal() > p[j].reciprocal() + slack) {
      throw std::invalid_argument("hypothesis violated: q[" +
                                  std::to_string(j + 1) + "] < p[" +
                                  std::to_string(j + 1) + "]");
    }
  }
  const double balance = r.reciprocal() - harmonic_sum(p) + harmonic_sum(q);
  InclusionResult out;
  out.balance = balance;
  if (balance > slack) {
    out.hypothesis = 'A';
  } else if (balance >= -slack) {
    // zero balance: admissible only when the first inequality is strict
    if (!(q[0].reciprocal() < p[0].reciprocal() - slack)) {
      throw std::invalid_argument(
          "hypothesis violated: 1/r - |1/p| + |1/q| = 0 requires q[1] > p[1] "
          "strictly");
    }
    out.hypothesis = 'B';
  } else {
    throw std::invalid_argument(
        "hypothesis violated: 1/r - |1/p| + |1/q| < 0");
  }

  const int d = part.d();
  out.s.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const std::vector<int> axes = part.tail_axes(k);
    const double inv =
        r.reciprocal() - harmonic_sum(p, axes) + harmonic_sum(q, axes);
    if (inv <= slack) {
      throw std::domain_error("degenerate exponent: 1/s_" +
                              std::to_string(k + 1) + " <= 0");
    }
    out.s.push_back(Exponent::from_reciprocal(std::min(inv, 1.0)));
  }
  return out;
}

// Anisotropic Hardy-Littlewood exponents for a block partition:
//   1/s_k = 1/2 - |1/p|_{tail k} + |tail k| / (2m),
// valid for p in (1, 2m]^m with |1/p| < 1. Then s_k >= 2, the sequence is
// nonincreasing, and s_1 = (1 - |1/p|)^{-1}.
inline ExponentVector hl_block_exponents(const ExponentVector& p,
                                         const BlockPartition& part,
                                         double slack = kHypothesisSlack) {
  const int m = part.m();
  if (p.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument(
        "hl_block_exponents: p must have one entry per axis of the partition");
  }
  const double recip_2m = 1.0 / (2.0 * m);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j].reciprocal() >= 1.0 - slack) {
      throw std::invalid_argument("p[" + std::to_string(j + 1) +
                                  "] must be > 1");
    }
    if (p[j].reciprocal() < recip_2m - slack) {
      throw std::invalid_argument("p[" + std::to_string(j + 1) +
                                  "] must be <= 2m = " + std::to_string(2 * m));
    }
  }
  const double total = harmonic_sum(p);
  if (total >= 1.0 - slack) {
    throw std::invalid_argument("|1/p| must be < 1, got " +
                                std::to_string(total));
  }
  ExponentVector s;
  s.reserve(static_cast<std::size_t>(part.d()));
  for (int k = 0; k < part.d(); ++k) {
    const std::vector<int> axes = part.tail_axes(k);
    const double inv = 0.5 - harmonic_sum(p, axes) +
                       recip_2m * static_cast<double>(axes.size());
    s.push_back(Exponent::from_reciprocal(std::clamp(inv, 0.0, 1.0)));
  }
  return s;
}

enum class HlRange {
  sum_at_least_half,  // 1/2 <= |1/p| < 1
  sum_below_half,     // |1/p| < 1/2; accepted, flagged
};

inline const char* hl_range_name(HlRange r) {
  return r == HlRange::sum_at_least_half ? "sum_at_least_half"
                                         : "sum_below_half";
}

struct IsotropicHlExponent {
  Exponent s;
  HlRange range = HlRange::sum_at_least_half;
};

// The isotropic exponent (1 - |1/p|)^{-1}, defined whenever |1/p| < 1.
inline IsotropicHlExponent isotropic_hl_exponent(
    const ExponentVector& p, double slack = kHypothesisSlack) {
  if (p.empty()) {
    throw std::invalid_argument("isotropic_hl_exponent: p must be nonempty");
  }
  const double total = harmonic_sum(p);
  if (total >= 1.0 - slack) {
    throw std::invalid_argument("|1/p| must be < 1, got " +
                                std::to_string(total));
  }
  IsotropicHlExponent out;
  out.s = Exponent::from_reciprocal(1.0 - total);
  out.range = total >= 0.5 ? HlRange::sum_at_least_half
                           : HlRange::sum_below_half;
  return out;
}

// Equal-exponent specialization over block sizes n_1, ..., n_d:
//   1/s_k = 1/2 - (n_k + ... + n_d) (1/p - 1/(2m)),   m = sum n_k,
// valid for m < p <= 2m. Kept as an independent closed form; the consistency
// with hl_block_exponents on constant vectors is a tested property, not an
// implementation shortcut.
inline ExponentVector corollary_exponents(Exponent p,
                                          const std::vector<int>& block_sizes,
                                          double slack = kHypothesisSlack) {
  if (block_sizes.empty()) {
    throw std::invalid_argument("corollary_exponents: need block sizes");
  }
  int m = 0;
  for (int n : block_sizes) {
    if (n < 1) {
      throw std::invalid_argument(
          "corollary_exponents: block sizes must be positive");
    }
    m += n;
  }
  const double r = p.reciprocal();
  if (!(r < 1.0 / m - slack)) {
    throw std::invalid_argument("p must be > m = " + std::to_string(m));
  }
  if (!(r >= 1.0 / (2.0 * m) - slack)) {
    throw std::invalid_argument("p must be <= 2m = " + std::to_string(2 * m));
  }
  const double corr = r - 1.0 / (2.0 * m);  // 1/p - 1/(2m)
  ExponentVector s;
  s.reserve(block_sizes.size());
  int tail = m;
  for (int n : block_sizes) {
    const double inv = 0.5 - static_cast<double>(tail) * corr;
    s.push_back(Exponent::from_reciprocal(std::clamp(inv, 0.0, 1.0)));
    tail -= n;
  }
  return s;
}

struct TrivialityResult {
  bool trivial = false;
  int witness_block = -1;  // first k with 1/q_k > sum_{j in I_k} 1/p_j
};

// The block summing class collapses to {0} as soon as one block demands a
// strictly faster output decay than its inputs can supply.
inline TrivialityResult triviality_check(const ExponentVector& p,
                                         const ExponentVector& q,
                                         const BlockPartition& part,
                                         double slack = kHypothesisSlack) {
  if (p.size() != static_cast<std::size_t>(part.m())) {
    throw std::invalid_argument(
        "triviality_check: p must have one entry per axis");
  }
  if (q.size() != static_cast<std::size_t>(part.d())) {
    throw std::invalid_argument(
        "triviality_check: q must have one entry per block");
  }
  for (int k = 0; k < part.d(); ++k) {
    const double block_sum = harmonic_sum(p, part.block(k));
    if (q[static_cast<std::size_t>(k)].reciprocal() > block_sum + slack) {
      return {true, k};
    }
  }
  return {false, -1};
}

}  // namespace blocksum
