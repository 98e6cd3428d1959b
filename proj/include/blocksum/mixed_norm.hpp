#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "blocksum/exponent.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/tensor.hpp"

namespace blocksum {

// Nested anisotropic norm of a d-way tensor: the innermost (last) axis is
// reduced with s_d first, the outermost with s_1 last. An infinite level is
// a supremum of absolute values. Equal exponents collapse to the flat l_r
// norm of all entries.
inline double mixed_norm(const CoefficientTensor& t, const ExponentVector& s) {
  if (s.size() != static_cast<std::size_t>(t.order())) {
    throw std::invalid_argument(
        "mixed_norm: need one exponent per tensor axis");
  }
  std::vector<double> buf(t.entries().begin(), t.entries().end());
  std::size_t count = buf.size();
  for (int axis = t.order() - 1; axis >= 1; --axis) {
    const std::size_t len =
        static_cast<std::size_t>(t.dims()[static_cast<std::size_t>(axis)]);
    const double sv = s[static_cast<std::size_t>(axis)].value();
    const std::size_t rows = count / len;
    for (std::size_t r = 0; r < rows; ++r) {
      buf[r] = lp_reduce(
          std::span<const double>(buf.data() + r * len, len), sv);
    }
    count = rows;
  }
  return lp_reduce(std::span<const double>(buf.data(), count), s[0].value());
}

inline double mixed_norm(const BlockTensor& b, const ExponentVector& s) {
  return mixed_norm(b.data, s);
}

// flat l_r norm of all entries, ignoring the axis structure
inline double flat_norm(const CoefficientTensor& t, Exponent r) {
  return lp_reduce(t.entries(), r.value());
}

}  // namespace blocksum
