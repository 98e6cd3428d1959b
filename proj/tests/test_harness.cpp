#include <doctest.h>

#include <cmath>
#include <vector>

#include "blocksum/harness.hpp"

using namespace blocksum;

namespace {

const BlockPartition kPart21(3, {{0, 1}, {2}});

FormInstance delta_form(int n) {
  return FormInstance(CoefficientTensor::diagonal(3, n), exponents({4, 4, 4}));
}

SweepConfig small_sweep_config() {
  SweepConfig cfg;
  cfg.families = {WitnessKind::diagonal};
  cfg.n_grid = {2, 4, 8};
  cfg.seeds = {0};
  cfg.p = exponents({4, 4, 4});
  cfg.partition = kPart21;
  cfg.rule = ExponentRule::hl_block;
  return cfg;
}

}  // namespace

TEST_CASE("left-hand side of the block inequality") {
  // delta form: the block restriction is the identity, so the mixed norm is
  // n^(1/s_1)
  const double lhs = hl_lhs(delta_form(4), kPart21, exponents({4, 12.0 / 5.0}));
  CHECK(std::abs(lhs - std::sqrt(2.0)) <= 1e-12);

  const FormInstance zero(CoefficientTensor(std::vector<int>{2, 2, 2}),
                          exponents({4, 4, 4}));
  CHECK(hl_lhs(zero, kPart21, exponents({4, 12.0 / 5.0})) == 0.0);

  // singleton partition with equal exponents is the flat norm
  CoefficientTensor t({2, 2}, {1.0, -2.0, 0.5, 3.0});
  const FormInstance A(t, exponents({4, 4}));
  const double flat = hl_lhs(A, BlockPartition::singletons(2),
                             exponents({3, 3}));
  CHECK(std::abs(flat - flat_norm(t, Exponent(3.0))) <= 1e-12);
}

TEST_CASE("block lengths of a non-cubic tensor are the per-block minima") {
  CoefficientTensor t({3, 2, 4});
  double fill = -1.0;
  for (double& v : t.entries()) v = (fill = -fill + 0.125);
  CHECK(full_block_lengths(t, kPart21) == std::vector<int>{2, 4});
  const FormInstance A(t, exponents({4, 4, 4}));
  // restriction walks the shared diagonal of the first two axes
  const BlockTensor b = block_restrict(t, kPart21, {2, 4});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(b.data.at({i, j}) == t.at({i, i, j}));
  }
  CHECK(hl_lhs(A, kPart21, exponents({4, 2.5})) ==
        doctest::Approx(mixed_norm(b, exponents({4, 2.5}))).epsilon(1e-14));
}

TEST_CASE("ratio of the delta family is 1") {
  for (int n : {2, 4, 8}) {
    const RatioResult r =
        hl_ratio(delta_form(n), kPart21, exponents({4, 12.0 / 5.0}));
    CHECK(std::abs(r.ratio - 1.0) <= 1e-6);
    CHECK(r.norm.converged);
  }
}

TEST_CASE("ratio is scale invariant under shared seeds") {
  const FormInstance A = delta_form(4);
  CoefficientTensor scaled = A.tensor;
  for (double& v : scaled.entries()) v *= -7.5;
  const FormInstance B(scaled, A.domain);
  const ExponentVector s = exponents({4, 12.0 / 5.0});
  const RatioResult ra = hl_ratio(A, kPart21, s);
  const RatioResult rb = hl_ratio(B, kPart21, s);
  CHECK(std::abs(ra.ratio - rb.ratio) <= 1e-12 * std::max(1.0, ra.ratio));
}

TEST_CASE("sup-norm identity uses the exact path") {
  const int n = 4;
  const FormInstance A(CoefficientTensor::diagonal(2, n),
                       {Exponent::infinity(), Exponent::infinity()});
  const RatioResult r =
      hl_ratio(A, BlockPartition::singletons(2), exponents({2, 2}));
  CHECK(r.norm.method == NormMethod::exact_sign);
  CHECK(r.norm.value == static_cast<double>(n));
  CHECK(std::abs(r.ratio - 1.0 / std::sqrt(n)) <= 1e-12);
}

TEST_CASE("a vanishing estimate with nonzero left side is an error") {
  // alternating signs make the uniform start stagnate at zero; a single
  // restart therefore returns estimate 0 while the left side is positive
  const FormInstance A(CoefficientTensor({2, 2}, {1, -1, -1, 1}),
                       exponents({2, 2}));
  NormConfig cfg;
  cfg.restarts = 1;
  cfg.prefer_exact = false;
  CHECK_THROWS_AS(
      hl_ratio(A, BlockPartition::singletons(2), exponents({2, 2}), cfg),
      std::domain_error);
}

TEST_CASE("sweep over the diagonal family") {
  const SweepReport report = sweep(small_sweep_config());
  REQUIRE(report.rows.size() == 3);
  for (const SweepRow& row : report.rows) {
    CHECK(std::abs(row.ratio - 1.0) <= 1e-6);
    CHECK(row.converged);
    CHECK(std::abs(row.ratio - row.lhs / row.norm) <= 1e-12);
  }
  CHECK(std::abs(report.s[0].value() - 4.0) <= 1e-12);
  CHECK(std::abs(report.s[1].value() - 2.4) <= 1e-12);
}

TEST_CASE("empty grids produce empty reports") {
  SweepConfig cfg = small_sweep_config();
  cfg.n_grid.clear();
  const SweepReport report = sweep(cfg);
  CHECK(report.rows.empty());
  CHECK(report.csv == "family,n,seed,rule,s,lhs,norm,ratio,converged\n");
}

TEST_CASE("sweeps are deterministic and sorted") {
  SweepConfig cfg = small_sweep_config();
  cfg.families = {WitnessKind::diagonal, WitnessKind::random_sign,
                  WitnessKind::block_repeated};
  cfg.n_grid = {8, 2, 4};  // deliberately unsorted
  cfg.seeds = {1, 0};
  cfg.master_seed = 5;
  const SweepReport a = sweep(cfg);
  const SweepReport b = sweep(cfg);
  CHECK(a.csv == b.csv);
  CHECK(a.content_hash == b.content_hash);
  CHECK(sweep_sidecar(a).dump() == sweep_sidecar(b).dump());
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    const auto key = [](const SweepRow& r) {
      return std::tuple(static_cast<int>(r.family), r.n, r.seed);
    };
    CHECK(key(a.rows[i - 1]) < key(a.rows[i]));
  }
}

TEST_CASE("sweep config validation happens before any computation") {
  SweepConfig cfg = small_sweep_config();
  cfg.p = exponents({4, 4});  // arity mismatch
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);

  SweepConfig bad_rule = small_sweep_config();
  bad_rule.rule = ExponentRule::custom;  // missing custom_s
  CHECK_THROWS_AS(sweep(bad_rule), std::invalid_argument);

  SweepConfig bad_n = small_sweep_config();
  bad_n.n_grid = {0};
  CHECK_THROWS_AS(sweep(bad_n), std::invalid_argument);
}

TEST_CASE("sweep config round-trips through JSON") {
  SweepConfig cfg = small_sweep_config();
  cfg.families = {WitnessKind::random_gaussian, WitnessKind::block_repeated};
  cfg.seeds = {3, 9};
  cfg.master_seed = 11;
  cfg.scale = 0.5;
  cfg.norm.restarts = 12;
  const nlohmann::json j = sweep_config_to_json(cfg);
  const SweepConfig back = sweep_config_from_json(j);
  CHECK(sweep_config_to_json(back).dump() == j.dump());
}

TEST_CASE("custom rule feeds the probe exponents through unchanged") {
  SweepConfig cfg = small_sweep_config();
  cfg.rule = ExponentRule::custom;
  cfg.custom_s = exponents({3, 2});
  const SweepReport report = sweep(cfg);
  CHECK(report.s == cfg.custom_s);
}

TEST_CASE("anisotropic exponents compared with the isotropic vector") {
  const AnisotropyGain gain =
      anisotropy_gain(delta_form(4), kPart21, exponents({4, 4, 4}));
  REQUIRE(gain.s_aniso.size() == 2);
  CHECK(std::abs(gain.s_aniso[0].value() - 4.0) <= 1e-12);
  CHECK(std::abs(gain.s_aniso[1].value() - 2.4) <= 1e-12);
  CHECK(std::abs(gain.s_iso[1].value() - 4.0) <= 1e-12);
  // diagonal block restriction has singleton inner sums, so the inner
  // exponent is inert and the two sides agree
  CHECK(std::abs(gain.lhs_aniso - gain.lhs_iso) <= 1e-12);
}

TEST_CASE("random sign instances gain strictly from anisotropy") {
  WitnessSpec spec;
  spec.kind = WitnessKind::random_sign;
  spec.order = 3;
  spec.n = 4;
  spec.seed = 12;
  const FormInstance A(make_witness(spec), exponents({4, 4, 4}));
  const AnisotropyGain gain = anisotropy_gain(A, kPart21, A.domain);
  CHECK(gain.lhs_aniso > gain.lhs_iso + 1e-6);
}

TEST_CASE("anisotropic side dominates on every generated instance") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    WitnessSpec spec;
    spec.kind = seed % 2 ? WitnessKind::random_sign
                         : WitnessKind::random_gaussian;
    spec.order = 3;
    spec.n = 3 + static_cast<int>(seed % 3);
    spec.seed = seed;
    const FormInstance A(make_witness(spec, kPart21), exponents({4, 4, 4}));
    const AnisotropyGain gain = anisotropy_gain(A, kPart21, A.domain);
    CHECK(gain.lhs_aniso >= gain.lhs_iso - 1e-10);
  }
}

TEST_CASE("block-repeated witness is supported on the block index set") {
  WitnessSpec spec;
  spec.kind = WitnessKind::block_repeated;
  spec.order = 3;
  spec.n = 2;
  const CoefficientTensor t = make_witness(spec, kPart21);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        CHECK(t.at({i, j, k}) == (i == j ? 1.0 : 0.0));
      }
    }
  }
  CHECK_THROWS_AS(make_witness(spec), std::invalid_argument);
}

TEST_CASE("divergence probe reproduces the closed-form slope") {
  const ProbeReport report =
      triviality_probe(exponents({4, 4}), exponents({1.5}),
                       BlockPartition::whole(2), {8, 16, 32, 64});
  CHECK(report.witness_block == 0);
  CHECK(report.slope_defined);
  CHECK(std::abs(report.slope - 1.0 / 6.0) <= 0.02);
  CHECK(std::abs(report.reference_slope - 1.0 / 6.0) <= 1e-12);
  for (const ProbeRow& row : report.rows) {
    // quotient = L^(1/q - 1/p_1 - 1/p_2) for this configuration
    const double expect = std::pow(row.length, 1.0 / 6.0);
    CHECK(std::abs(row.quotient - expect) <= 1e-6 * expect);
    CHECK(row.weak_converged);
  }
}

TEST_CASE("probe rejects non-trivial configurations") {
  CHECK_THROWS_AS(triviality_probe(exponents({2, 2}), exponents({1}),
                                   BlockPartition::whole(2), {8, 16}),
                  std::invalid_argument);
}

TEST_CASE("probe with one length has no slope") {
  const ProbeReport report = triviality_probe(
      exponents({4, 4}), exponents({1.5}), BlockPartition::whole(2), {16});
  CHECK_FALSE(report.slope_defined);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].lhs > 0.0);
}

TEST_CASE("probe handles blocks that do not witness the violation") {
  // second block is the witness; the first-block slot carries a one-shot
  // sequence and contributes weak norm 1
  const ProbeReport report =
      triviality_probe(exponents({4, 4, 4}), exponents({4, 1.5}),
                       BlockPartition(3, {{0, 1}, {2}}), {8, 16, 32});
  CHECK(report.witness_block == 1);
  const double expect_slope = 2.0 / 3.0 - 0.25;
  CHECK(report.slope_defined);
  CHECK(std::abs(report.slope - expect_slope) <= 0.02);
}
