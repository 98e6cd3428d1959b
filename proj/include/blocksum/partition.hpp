#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace blocksum {

// Ordered partition I_1, ..., I_d of the axis set {0, ..., m-1}. The order
// is significant: block k owns the k-th index of every block-restricted
// tensor and the k-th exponent of every anisotropic norm, so blocks are kept
// exactly as given and never renumbered.
class BlockPartition {
 public:
  BlockPartition(int m, std::vector<std::vector<int>> blocks)
      : m_(m), blocks_(std::move(blocks)) {
    if (m_ < 1) throw std::invalid_argument("partition: m must be >= 1");
    if (blocks_.empty() || blocks_.size() > static_cast<std::size_t>(m_)) {
      throw std::invalid_argument(
          "partition must have between 1 and m blocks");
    }
    block_of_.assign(static_cast<std::size_t>(m_), -1);
    int covered = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k].empty()) {
        throw std::invalid_argument("partition block " + std::to_string(k + 1) +
                                    " is empty");
      }
      for (int j : blocks_[k]) {
        if (j < 0 || j >= m_) {
          throw std::out_of_range("partition: axis " + std::to_string(j) +
                                  " out of range for m = " +
                                  std::to_string(m_));
        }
        if (block_of_[static_cast<std::size_t>(j)] != -1) {
          throw std::invalid_argument("partition: axis " + std::to_string(j) +
                                      " appears in two blocks");
        }
        block_of_[static_cast<std::size_t>(j)] = static_cast<int>(k);
        ++covered;
      }
    }
    if (covered != m_) {
      throw std::invalid_argument(
          "partition blocks must cover every axis exactly once");
    }
  }

  // the multiple-summing partition {{0},...,{m-1}}
  static BlockPartition singletons(int m) {
    std::vector<std::vector<int>> b;
    for (int j = 0; j < m; ++j) b.push_back({j});
    return BlockPartition(m, std::move(b));
  }

  // the absolutely-summing partition {{0,...,m-1}}
  static BlockPartition whole(int m) {
    std::vector<int> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);
    return BlockPartition(m, {all});
  }

  int m() const { return m_; }
  int d() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int k) const {
    return blocks_.at(static_cast<std::size_t>(k));
  }
  int block_of(int axis) const {
    return block_of_.at(static_cast<std::size_t>(axis));
  }

  // axes of I_k u I_{k+1} u ... u I_{d-1} (0-based k)
  std::vector<int> tail_axes(int k) const {
    std::vector<int> out;
    for (std::size_t i = static_cast<std::size_t>(k); i < blocks_.size(); ++i) {
      out.insert(out.end(), blocks_[i].begin(), blocks_[i].end());
    }
    return out;
  }

  int tail_count(int k) const {
    int c = 0;
    for (std::size_t i = static_cast<std::size_t>(k); i < blocks_.size(); ++i) {
      c += static_cast<int>(blocks_[i].size());
    }
    return c;
  }

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
    return a.m_ == b.m_ && a.blocks_ == b.blocks_;
  }
  friend bool operator!=(const BlockPartition& a, const BlockPartition& b) {
    return !(a == b);
  }

 private:
  int m_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

}  // namespace blocksum
