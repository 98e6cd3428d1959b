#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blocksum/partition.hpp"
#include "blocksum/rng.hpp"
#include "blocksum/tensor.hpp"

namespace blocksum {

// Instance generators used by sweeps. Sign and gaussian tensors are the
// standard near-extremal witnesses; the block-repeated family is supported
// on the index set the partition selects.
enum class WitnessKind { diagonal, random_sign, random_gaussian, block_repeated };

inline const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::diagonal: return "diagonal";
    case WitnessKind::random_sign: return "random-sign";
    case WitnessKind::random_gaussian: return "random-gaussian";
    case WitnessKind::block_repeated: return "block-repeated";
  }
  return "?";
}

inline std::optional<WitnessKind> witness_kind_from_name(std::string_view s) {
  if (s == "diagonal") return WitnessKind::diagonal;
  if (s == "random-sign") return WitnessKind::random_sign;
  if (s == "random-gaussian") return WitnessKind::random_gaussian;
  if (s == "block-repeated") return WitnessKind::block_repeated;
  return std::nullopt;
}

struct WitnessSpec {
  WitnessKind kind = WitnessKind::diagonal;
  int order = 2;
  int n = 2;
  std::uint64_t master_seed = 0;
  std::uint64_t seed = 0;
  double scale = 1.0;
};

// Pure function of the spec (and the partition, for the block-repeated
// family): the rng key is derived from (master_seed, family, n, seed) only.
inline CoefficientTensor make_witness(
    const WitnessSpec& spec,
    const std::optional<BlockPartition>& part = std::nullopt) {
  if (spec.order < 1 || spec.n < 1) {
    throw std::invalid_argument("witness: order and n must be >= 1");
  }
  if (!std::isfinite(spec.scale)) {
    throw std::invalid_argument("witness: scale must be finite");
  }
  const std::vector<int> dims(static_cast<std::size_t>(spec.order), spec.n);
  CounterRng rng(CounterRng::mix({spec.master_seed,
                                  static_cast<std::uint64_t>(spec.kind),
                                  static_cast<std::uint64_t>(spec.n),
                                  spec.seed}));
  switch (spec.kind) {
    case WitnessKind::diagonal:
      return CoefficientTensor::diagonal(spec.order, spec.n, spec.scale);
    case WitnessKind::random_sign: {
      CoefficientTensor t(dims);
      for (double& v : t.entries()) v = spec.scale * rng.sign();
      return t;
    }
    case WitnessKind::random_gaussian: {
      CoefficientTensor t(dims);
      for (double& v : t.entries()) v = spec.scale * rng.gaussian();
      return t;
    }
    case WitnessKind::block_repeated: {
      if (!part || part->m() != spec.order) {
        throw std::invalid_argument(
            "block-repeated witness needs a partition of matching arity");
      }
      CoefficientTensor t(dims);
      std::vector<int> idx(static_cast<std::size_t>(spec.order), 0);
      std::span<double> out = t.entries();
      for (std::size_t lin = 0; lin < t.size(); ++lin) {
        bool on = true;
        for (int k = 0; k < part->d() && on; ++k) {
          const std::vector<int>& block = part->block(k);
          for (std::size_t a = 1; a < block.size(); ++a) {
            if (idx[static_cast<std::size_t>(block[a])] !=
                idx[static_cast<std::size_t>(block[0])]) {
              on = false;
              break;
            }
          }
        }
        out[lin] = on ? spec.scale : 0.0;
        for (int a = spec.order; a-- > 0;) {
          if (++idx[static_cast<std::size_t>(a)] < spec.n) break;
          idx[static_cast<std::size_t>(a)] = 0;
        }
      }
      return t;
    }
  }
  throw std::logic_error("unreachable witness kind");
}

}  // namespace blocksum
