#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blocksum/partition.hpp"

namespace blocksum {

// Dense real m-way array in row-major order (last index fastest).
class CoefficientTensor {
 public:
  explicit CoefficientTensor(std::vector<int> dims) : dims_(std::move(dims)) {
    init_layout();
    entries_.assign(size_, 0.0);
  }

  CoefficientTensor(std::vector<int> dims, std::vector<double> entries)
      : dims_(std::move(dims)), entries_(std::move(entries)) {
    init_layout();
    if (entries_.size() != size_) {
      throw std::invalid_argument(
          "tensor entries length " + std::to_string(entries_.size()) +
          " does not match the product of dims " + std::to_string(size_));
    }
    for (double v : entries_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("tensor entries must be finite");
      }
    }
  }

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return size_; }
  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }
  std::size_t stride(int axis) const {
    return strides_.at(static_cast<std::size_t>(axis));
  }

  std::size_t offset(std::span<const int> idx) const {
    if (idx.size() != dims_.size()) {
      throw std::invalid_argument("tensor index has wrong arity");
    }
    std::size_t off = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      if (idx[a] < 0 || idx[a] >= dims_[a]) {
        throw std::out_of_range("tensor index out of range on axis " +
                                std::to_string(a + 1));
      }
      off += static_cast<std::size_t>(idx[a]) * strides_[a];
    }
    return off;
  }

  double at(std::span<const int> idx) const { return entries_[offset(idx)]; }
  double& at(std::span<const int> idx) { return entries_[offset(idx)]; }
  double at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double& at(std::initializer_list<int> idx) {
    return entries_[offset(std::span<const int>(idx.begin(), idx.size()))];
  }

  // delta tensor: 1 on the full diagonal, 0 elsewhere
  static CoefficientTensor diagonal(int order, int n, double value = 1.0) {
    CoefficientTensor t(std::vector<int>(static_cast<std::size_t>(order), n));
    std::size_t step = 0;
    for (int a = 0; a < order; ++a) step += t.stride(a);
    for (int i = 0; i < n; ++i) {
      t.entries_[static_cast<std::size_t>(i) * step] = value;
    }
    return t;
  }

 private:
  void init_layout() {
    if (dims_.empty()) {
      throw std::invalid_argument("tensor order must be >= 1");
    }
    size_ = 1;
    for (int d : dims_) {
      if (d < 1) throw std::invalid_argument("tensor dims must be >= 1");
      if (size_ > (static_cast<std::size_t>(1) << 31) / static_cast<std::size_t>(d)) {
        throw std::invalid_argument("tensor too large");
      }
      size_ *= static_cast<std::size_t>(d);
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t a = dims_.size(); a-- > 1;) {
      strides_[a - 1] = strides_[a] * static_cast<std::size_t>(dims_[a]);
    }
  }

  std::vector<int> dims_;
  std::vector<double> entries_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

// d-way pull-back of an m-way tensor along a block partition, keeping the
// partition used so downstream code can report provenance.
struct BlockTensor {
  CoefficientTensor data;
  BlockPartition provenance;
};

// largest admissible lengths: L_k = min dim over the axes of I_k
inline std::vector<int> full_block_lengths(const CoefficientTensor& a,
                                           const BlockPartition& part) {
  std::vector<int> lengths;
  lengths.reserve(static_cast<std::size_t>(part.d()));
  for (int k = 0; k < part.d(); ++k) {
    int L = a.dims()[static_cast<std::size_t>(part.block(k).front())];
    for (int axis : part.block(k)) {
      L = std::min(L, a.dims()[static_cast<std::size_t>(axis)]);
    }
    lengths.push_back(L);
  }
  return lengths;
}

// b(i_1, ..., i_d) = a at the multi-index that places i_k on every axis of
// I_k. The singleton partition is the identity restriction; the whole-set
// partition extracts the diagonal.
inline BlockTensor block_restrict(const CoefficientTensor& a,
                                  const BlockPartition& part,
                                  const std::vector<int>& lengths) {
  if (part.m() != a.order()) {
    throw std::invalid_argument(
        "block_restrict: partition arity does not match tensor order");
  }
  const int d = part.d();
  if (lengths.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument(
        "block_restrict: need one length per block");
  }
  // placing i_k on every axis of I_k makes the source offset linear in i_k
  std::vector<std::size_t> combined_stride(static_cast<std::size_t>(d), 0);
  for (int k = 0; k < d; ++k) {
    if (lengths[static_cast<std::size_t>(k)] < 1) {
      throw std::invalid_argument("block_restrict: lengths must be >= 1");
    }
    for (int axis : part.block(k)) {
      if (lengths[static_cast<std::size_t>(k)] >
          a.dims()[static_cast<std::size_t>(axis)]) {
        throw std::invalid_argument(
            "block_restrict: length " +
            std::to_string(lengths[static_cast<std::size_t>(k)]) +
            " exceeds dim of axis " + std::to_string(axis + 1));
      }
      combined_stride[static_cast<std::size_t>(k)] += a.stride(axis);
    }
  }
  CoefficientTensor b(lengths);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const std::size_t total = b.size();
  std::span<double> out = b.entries();
  std::span<const double> src = a.entries();
  std::size_t src_off = 0;
  for (std::size_t lin = 0; lin < total; ++lin) {
    out[lin] = src[src_off];
    // odometer increment, last block fastest
    for (int k = d; k-- > 0;) {
      const std::size_t ku = static_cast<std::size_t>(k);
      ++idx[ku];
      src_off += combined_stride[ku];
      if (idx[ku] < lengths[ku]) break;
      src_off -= combined_stride[ku] * static_cast<std::size_t>(idx[ku]);
      idx[ku] = 0;
    }
  }
  return BlockTensor{std::move(b), part};
}

}  // namespace blocksum
