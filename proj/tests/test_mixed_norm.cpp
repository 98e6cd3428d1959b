#include <doctest.h>

#include <cmath>
#include <vector>

#include "blocksum/mixed_norm.hpp"
#include "blocksum/rng.hpp"
#include "blocksum/tensor.hpp"

using namespace blocksum;

namespace {

CoefficientTensor random_tensor(CounterRng& rng, int max_order = 3,
                                int max_dim = 4) {
  const int order = rng.uniform_int(1, max_order);
  std::vector<int> dims;
  for (int a = 0; a < order; ++a) dims.push_back(rng.uniform_int(2, max_dim));
  CoefficientTensor t(dims);
  for (double& v : t.entries()) v = rng.gaussian();
  return t;
}

ExponentVector random_exponents(CounterRng& rng, int d, double lo = 1.0,
                                double hi = 8.0) {
  ExponentVector s;
  for (int k = 0; k < d; ++k) s.push_back(Exponent(rng.uniform(lo, hi)));
  return s;
}

}  // namespace

TEST_CASE("tensor layout is row-major with the last index fastest") {
  CoefficientTensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  CHECK(t.at({0, 2}) == 2.0);
  CHECK(t.at({1, 0}) == 3.0);
  CHECK(t.stride(0) == 3);
  CHECK(t.stride(1) == 1);
  CHECK_THROWS_AS(t.at({2, 0}), std::out_of_range);
  CHECK_THROWS_AS(CoefficientTensor({2, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientTensor({2}, {1, std::nan("")}),
                  std::invalid_argument);
}

TEST_CASE("diagonal factory") {
  const CoefficientTensor d = CoefficientTensor::diagonal(3, 2);
  CHECK(d.at({0, 0, 0}) == 1.0);
  CHECK(d.at({1, 1, 1}) == 1.0);
  CHECK(d.at({0, 1, 1}) == 0.0);
}

TEST_CASE("block restriction of the delta tensor is the identity matrix") {
  const int n = 4;
  const CoefficientTensor a = CoefficientTensor::diagonal(3, n);
  const BlockTensor b =
      block_restrict(a, BlockPartition(3, {{0, 1}, {2}}), {n, n});
  REQUIRE(b.data.dims() == std::vector<int>{n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CHECK(b.data.at({i, j}) == (i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("singleton partition restriction is the identity") {
  CounterRng rng(7);
  CoefficientTensor a({2, 3, 2});
  for (double& v : a.entries()) v = rng.gaussian();
  const BlockTensor b =
      block_restrict(a, BlockPartition::singletons(3), {2, 3, 2});
  REQUIRE(b.data.dims() == a.dims());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b.data.entries()[i] == a.entries()[i]);
  }
}

TEST_CASE("whole partition extracts the full diagonal") {
  const CoefficientTensor a = CoefficientTensor::diagonal(3, 3, 2.5);
  const BlockTensor b = block_restrict(a, BlockPartition::whole(3), {3});
  REQUIRE(b.data.dims() == std::vector<int>{3});
  for (int i = 0; i < 3; ++i) CHECK(b.data.at({i}) == 2.5);
}

TEST_CASE("interleaved blocks repeat indices across their axes") {
  // b(i1, i2, i3) = a(i1, i2, i1, i2, i3)
  CounterRng rng(11);
  CoefficientTensor a({2, 2, 2, 2, 2});
  for (double& v : a.entries()) v = rng.gaussian();
  const BlockPartition part(5, {{0, 2}, {1, 3}, {4}});
  const BlockTensor b = block_restrict(a, part, {2, 2, 2});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        CHECK(b.data.at({i, j, k}) == a.at({i, j, i, j, k}));
      }
    }
  }
}

TEST_CASE("block restriction validates lengths") {
  const CoefficientTensor a = CoefficientTensor::diagonal(2, 3);
  CHECK_THROWS_AS(block_restrict(a, BlockPartition::whole(2), {4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(block_restrict(a, BlockPartition::whole(3), {3}),
                  std::invalid_argument);
  CHECK(full_block_lengths(a, BlockPartition::whole(2)) ==
        std::vector<int>{3});
}

TEST_CASE("mixed norm of the identity matrix") {
  const CoefficientTensor id = CoefficientTensor::diagonal(2, 2);
  CHECK(mixed_norm(id, exponents({1, 2})) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(mixed_norm(id, exponents({2, 1})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  // supremum levels
  CHECK(mixed_norm(id, {Exponent::infinity(), Exponent(1.0)}) ==
        doctest::Approx(1.0));
  CHECK(mixed_norm(id, {Exponent::infinity(), Exponent::infinity()}) == 1.0);
}

TEST_CASE("equal exponents collapse to the flat norm") {
  CoefficientTensor ones({2, 2}, {1, 1, 1, 1});
  for (double r : {1.0, 2.0, 4.0}) {
    const double nested = mixed_norm(ones, ExponentVector(2, Exponent(r)));
    CHECK(std::abs(nested - std::pow(4.0, 1.0 / r)) <= 1e-12 * nested);
  }
  CounterRng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const CoefficientTensor t = random_tensor(rng);
    const double r = rng.uniform(1.0, 6.0);
    const double nested = mixed_norm(
        t, ExponentVector(static_cast<std::size_t>(t.order()), Exponent(r)));
    const double flat = flat_norm(t, Exponent(r));
    CHECK(std::abs(nested - flat) <= 1e-12 * std::max(1.0, flat));
  }
}

TEST_CASE("mixed norm is absolutely homogeneous") {
  CounterRng rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const CoefficientTensor t = random_tensor(rng);
    const ExponentVector s = random_exponents(rng, t.order());
    const double lambda = rng.uniform(-3.0, 3.0);
    CoefficientTensor scaled = t;
    for (double& v : scaled.entries()) v *= lambda;
    const double lhs = mixed_norm(scaled, s);
    const double rhs = std::abs(lambda) * mixed_norm(t, s);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("mixed norm satisfies the triangle inequality") {
  CounterRng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const CoefficientTensor t = random_tensor(rng);
    CoefficientTensor u(t.dims());
    for (double& v : u.entries()) v = rng.gaussian();
    const ExponentVector s = random_exponents(rng, t.order());
    CoefficientTensor sum = t;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum.entries()[i] += u.entries()[i];
    }
    CHECK(mixed_norm(sum, s) <= mixed_norm(t, s) + mixed_norm(u, s) + 1e-10);
  }
}

TEST_CASE("raising any exponent never increases the mixed norm") {
  CounterRng rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const CoefficientTensor t = random_tensor(rng);
    ExponentVector s = random_exponents(rng, t.order(), 1.0, 6.0);
    const double before = mixed_norm(t, s);
    const int k = rng.uniform_int(0, t.order() - 1);
    const std::size_t ku = static_cast<std::size_t>(k);
    s[ku] = rng.uniform() < 0.1
                ? Exponent::infinity()
                : Exponent(s[ku].value() + rng.uniform(0.0, 3.0));
    CHECK(mixed_norm(t, s) <= before + 1e-10);
  }
}

TEST_CASE("moving the smaller exponent outside never increases the norm") {
  // transpose with swapped exponents against the original, 1 <= a <= b
  CounterRng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = rng.uniform_int(2, 5);
    const int cols = rng.uniform_int(2, 5);
    CoefficientTensor t({rows, cols});
    for (double& v : t.entries()) v = rng.gaussian();
    CoefficientTensor tt({cols, rows});
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) tt.at({j, i}) = t.at({i, j});
    }
    const double a = rng.uniform(1.0, 8.0);
    const double b = rng.uniform(a, 8.0);
    const double swapped = mixed_norm(tt, exponents({b, a}));
    const double original = mixed_norm(t, exponents({a, b}));
    CHECK(swapped <= original + 1e-10);
  }
}

TEST_CASE("mixed norm arity is validated") {
  const CoefficientTensor id = CoefficientTensor::diagonal(2, 2);
  CHECK_THROWS_AS(mixed_norm(id, exponents({2})), std::invalid_argument);
}

namespace {

// straight transcription of the nested definition, no scaling and no
// compensation; independent of the implementation path under test
double naive_mixed_norm(const CoefficientTensor& t, const ExponentVector& s,
                        std::vector<int>& idx, int axis) {
  const int len = t.dims()[static_cast<std::size_t>(axis)];
  const double sv = s[static_cast<std::size_t>(axis)].value();
  double acc = 0.0;
  double sup = 0.0;
  for (int i = 0; i < len; ++i) {
    idx[static_cast<std::size_t>(axis)] = i;
    const double inner =
        axis + 1 == t.order()
            ? std::abs(t.at(std::span<const int>(idx.data(), idx.size())))
            : naive_mixed_norm(t, s, idx, axis + 1);
    if (std::isinf(sv)) {
      sup = std::max(sup, inner);
    } else {
      acc += std::pow(inner, sv);
    }
  }
  return std::isinf(sv) ? sup : std::pow(acc, 1.0 / sv);
}

}  // namespace

TEST_CASE("mixed norm agrees with a naive nested transcription") {
  CounterRng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const CoefficientTensor t = random_tensor(rng);
    ExponentVector s;
    for (int k = 0; k < t.order(); ++k) {
      s.push_back(rng.uniform() < 0.2 ? Exponent::infinity()
                                      : Exponent(rng.uniform(1.0, 7.0)));
    }
    std::vector<int> idx(static_cast<std::size_t>(t.order()), 0);
    const double naive = naive_mixed_norm(t, s, idx, 0);
    const double fast = mixed_norm(t, s);
    CHECK(std::abs(fast - naive) <= 1e-10 * std::max(1.0, naive));
  }
}
