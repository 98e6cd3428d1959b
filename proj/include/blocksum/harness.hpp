#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "blocksum/exponent_rules.hpp"
#include "blocksum/form_norm.hpp"
#include "blocksum/mixed_norm.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/parse.hpp"
#include "blocksum/tensor_io.hpp"
#include "blocksum/weak_norm.hpp"
#include "blocksum/witness.hpp"

namespace blocksum {

// The left-hand side of the block inequality with canonical basis inputs:
// the anisotropic mixed norm of the block-restricted coefficient tensor.
inline double hl_lhs(const FormInstance& A, const BlockPartition& part,
                     const ExponentVector& s) {
  const BlockTensor b =
      block_restrict(A.tensor, part, full_block_lengths(A.tensor, part));
  return mixed_norm(b, s);
}

struct RatioResult {
  double lhs = 0.0;
  double ratio = 0.0;
  NormEstimate norm;
};

inline RatioResult hl_ratio(const FormInstance& A, const BlockPartition& part,
                            const ExponentVector& s,
                            const NormConfig& cfg = {}) {
  RatioResult out;
  out.lhs = hl_lhs(A, part, s);
  out.norm = estimate_norm(A, cfg);
  if (out.norm.value <= 0.0) {
    if (out.lhs > 0.0) {
      throw std::domain_error(
          "degenerate norm estimate: zero with nonzero left-hand side");
    }
    out.ratio = 0.0;
    return out;
  }
  out.ratio = out.lhs / out.norm.value;
  return out;
}

struct AnisotropyGain {
  double lhs_aniso = 0.0;
  double lhs_iso = 0.0;
  ExponentVector s_aniso;
  ExponentVector s_iso;
};

// Compares the block exponents against the constant isotropic vector on the
// same instance. Since s_k <= s_1 = rho componentwise and the mixed norm is
// antitone in each exponent, lhs_aniso >= lhs_iso always.
inline AnisotropyGain anisotropy_gain(const FormInstance& A,
                                      const BlockPartition& part,
                                      const ExponentVector& p) {
  AnisotropyGain out;
  out.s_aniso = hl_block_exponents(p, part);
  const Exponent rho = isotropic_hl_exponent(p).s;
  out.s_iso.assign(static_cast<std::size_t>(part.d()), rho);
  out.lhs_aniso = hl_lhs(A, part, out.s_aniso);
  out.lhs_iso = hl_lhs(A, part, out.s_iso);
  return out;
}

// ---------------------------------------------------------------------------
// sweeps

enum class ExponentRule { hl_block, isotropic, custom };

inline const char* exponent_rule_name(ExponentRule r) {
  switch (r) {
    case ExponentRule::hl_block: return "hl-block";
    case ExponentRule::isotropic: return "isotropic";
    case ExponentRule::custom: return "custom";
  }
  return "?";
}

inline std::optional<ExponentRule> exponent_rule_from_name(
    std::string_view s) {
  if (s == "hl-block") return ExponentRule::hl_block;
  if (s == "isotropic") return ExponentRule::isotropic;
  if (s == "custom") return ExponentRule::custom;
  return std::nullopt;
}

struct SweepConfig {
  std::vector<WitnessKind> families;
  std::vector<int> n_grid;
  std::vector<std::uint64_t> seeds;
  ExponentVector p;
  std::optional<BlockPartition> partition;
  ExponentRule rule = ExponentRule::hl_block;
  ExponentVector custom_s;  // used only by rule == custom
  std::uint64_t master_seed = 0;
  double scale = 1.0;
  NormConfig norm;
};

// Canonical serialization: every field is emitted, defaults included, so the
// sidecar fully determines the run and parse(render(cfg)) == cfg.
inline nlohmann::json sweep_config_to_json(const SweepConfig& cfg) {
  nlohmann::json j;
  nlohmann::json fams = nlohmann::json::array();
  for (WitnessKind k : cfg.families) fams.push_back(witness_kind_name(k));
  j["families"] = fams;
  j["n"] = cfg.n_grid;
  j["seeds"] = cfg.seeds;
  j["p"] = exponents_to_json(cfg.p);
  j["partition"] = cfg.partition ? render_partition(*cfg.partition) : "";
  j["rule"] = exponent_rule_name(cfg.rule);
  if (cfg.rule == ExponentRule::custom) {
    j["s"] = exponents_to_json(cfg.custom_s);
  }
  j["master_seed"] = cfg.master_seed;
  j["scale"] = cfg.scale;
  j["norm"] = {{"restarts", cfg.norm.restarts},
               {"tol", cfg.norm.tol},
               {"max_iter", cfg.norm.max_iter},
               {"seed", cfg.norm.seed},
               {"prefer_exact", cfg.norm.prefer_exact},
               {"exact_budget_bits", cfg.norm.exact_budget_bits}};
  return j;
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  if (!j.contains("families") || !j.contains("n") || !j.contains("p") ||
      !j.contains("partition")) {
    throw std::invalid_argument(
        "config needs \"families\", \"n\", \"p\" and \"partition\"");
  }
  for (const auto& f : j.at("families")) {
    const auto kind = witness_kind_from_name(f.get<std::string>());
    if (!kind) {
      throw std::invalid_argument("unknown family '" + f.get<std::string>() +
                                  "'");
    }
    cfg.families.push_back(*kind);
  }
  cfg.n_grid = j.at("n").get<std::vector<int>>();
  cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{0});
  cfg.p = exponents_from_json(j.at("p"));
  cfg.partition = parse_partition(j.at("partition").get<std::string>());
  const std::string rule = j.value("rule", std::string("hl-block"));
  const auto r = exponent_rule_from_name(rule);
  if (!r) throw std::invalid_argument("unknown rule '" + rule + "'");
  cfg.rule = *r;
  if (cfg.rule == ExponentRule::custom) {
    if (!j.contains("s")) {
      throw std::invalid_argument("rule \"custom\" needs an \"s\" list");
    }
    cfg.custom_s = exponents_from_json(j.at("s"));
  }
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  cfg.scale = j.value("scale", 1.0);
  if (j.contains("norm")) {
    const nlohmann::json& n = j.at("norm");
    cfg.norm.restarts = n.value("restarts", cfg.norm.restarts);
    cfg.norm.tol = n.value("tol", cfg.norm.tol);
    cfg.norm.max_iter = n.value("max_iter", cfg.norm.max_iter);
    cfg.norm.seed = n.value("seed", cfg.norm.seed);
    cfg.norm.prefer_exact = n.value("prefer_exact", cfg.norm.prefer_exact);
    cfg.norm.exact_budget_bits =
        n.value("exact_budget_bits", cfg.norm.exact_budget_bits);
  }
  return cfg;
}

// Resolves the exponent vector a config implies; throws (before any tensor
// work) when the rule's hypotheses fail.
inline ExponentVector resolve_rule_exponents(const SweepConfig& cfg) {
  const BlockPartition& part = *cfg.partition;
  switch (cfg.rule) {
    case ExponentRule::hl_block:
      return hl_block_exponents(cfg.p, part);
    case ExponentRule::isotropic: {
      const Exponent rho = isotropic_hl_exponent(cfg.p).s;
      return ExponentVector(static_cast<std::size_t>(part.d()), rho);
    }
    case ExponentRule::custom:
      if (cfg.custom_s.size() != static_cast<std::size_t>(part.d())) {
        throw std::invalid_argument(
            "custom s needs one exponent per partition block");
      }
      return cfg.custom_s;
  }
  throw std::logic_error("unreachable rule");
}

struct SweepRow {
  WitnessKind family = WitnessKind::diagonal;
  int n = 0;
  std::uint64_t seed = 0;
  ExponentVector s;
  double lhs = 0.0;
  double norm = 0.0;
  double ratio = 0.0;
  bool converged = false;
};

struct SweepReport {
  SweepConfig config;
  ExponentVector s;
  std::vector<SweepRow> rows;
  std::string csv;
  std::string content_hash;  // fnv1a64 of the csv bytes
};

inline void validate_sweep_config(const SweepConfig& cfg) {
  if (!cfg.partition) throw std::invalid_argument("config needs a partition");
  if (cfg.p.size() != static_cast<std::size_t>(cfg.partition->m())) {
    throw std::invalid_argument(
        "config: p must have one entry per partition axis");
  }
  for (int n : cfg.n_grid) {
    if (n < 1) throw std::invalid_argument("config: n values must be >= 1");
  }
  if (!std::isfinite(cfg.scale) || cfg.scale == 0.0) {
    throw std::invalid_argument("config: scale must be finite and nonzero");
  }
  if (cfg.norm.restarts < 1 || cfg.norm.max_iter < 1 ||
      !(cfg.norm.tol > 0.0)) {
    throw std::invalid_argument("config: bad norm estimator options");
  }
}

inline std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows,
                                     ExponentRule rule) {
  std::string csv = "family,n,seed,rule,s,lhs,norm,ratio,converged\n";
  for (const SweepRow& r : rows) {
    csv += witness_kind_name(r.family);
    csv += ',';
    csv += std::to_string(r.n);
    csv += ',';
    csv += std::to_string(r.seed);
    csv += ',';
    csv += exponent_rule_name(rule);
    csv += ',';
    for (std::size_t i = 0; i < r.s.size(); ++i) {
      if (i) csv += ';';
      csv += r.s[i].is_infinite() ? "inf" : format_g17(r.s[i].value());
    }
    csv += ',';
    csv += format_g17(r.lhs);
    csv += ',';
    csv += format_g17(r.norm);
    csv += ',';
    csv += format_g17(r.ratio);
    csv += ',';
    csv += r.converged ? "true" : "false";
    csv += '\n';
  }
  return csv;
}

// Deterministic experiment driver: rows are a pure function of the config,
// generated per (family, n, seed) with a per-row rng key, sorted before
// emission so assembly order never matters.
inline SweepReport sweep(const SweepConfig& cfg) {
  validate_sweep_config(cfg);
  SweepReport report;
  report.config = cfg;
  report.s = resolve_rule_exponents(cfg);
  const BlockPartition& part = *cfg.partition;

  for (WitnessKind family : cfg.families) {
    for (int n : cfg.n_grid) {
      for (std::uint64_t seed : cfg.seeds) {
        WitnessSpec spec;
        spec.kind = family;
        spec.order = part.m();
        spec.n = n;
        spec.master_seed = cfg.master_seed;
        spec.seed = seed;
        spec.scale = cfg.scale;
        FormInstance A(make_witness(spec, part), cfg.p);

        NormConfig ncfg = cfg.norm;
        ncfg.seed = CounterRng::mix({cfg.norm.seed, cfg.master_seed,
                                     static_cast<std::uint64_t>(family),
                                     static_cast<std::uint64_t>(n), seed});
        const RatioResult r = hl_ratio(A, part, report.s, ncfg);

        SweepRow row;
        row.family = family;
        row.n = n;
        row.seed = seed;
        row.s = report.s;
        row.lhs = r.lhs;
        row.norm = r.norm.value;
        row.ratio = r.ratio;
        row.converged = r.norm.converged;
        report.rows.push_back(std::move(row));
      }
    }
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return std::tuple(static_cast<int>(a.family), a.n, a.seed) <
                     std::tuple(static_cast<int>(b.family), b.n, b.seed);
            });
  report.csv = sweep_rows_to_csv(report.rows, cfg.rule);
  report.content_hash = hex64(fnv1a64(report.csv));
  return report;
}

inline nlohmann::json sweep_sidecar(const SweepReport& report) {
  nlohmann::json j;
  j["config"] = sweep_config_to_json(report.config);
  j["s"] = exponents_to_json(report.s);
  j["row_count"] = report.rows.size();
  j["content_hash"] = report.content_hash;
  j["tool"] = {{"name", "blocksum"}, {"version", "0.1.0"}};
  return j;
}

// ---------------------------------------------------------------------------
// triviality probe

struct ProbeRow {
  int length = 0;             // sequence length L
  double lhs = 0.0;           // block mixed norm of the outputs
  double weak_product = 1.0;  // product of the weak norms of the inputs
  double quotient = 0.0;      // lhs / weak_product
  std::vector<double> weak_norms;
  bool weak_converged = true;
};

struct ProbeReport {
  int witness_block = -1;        // 0-based index of the violating block
  double reference_slope = 0.0;  // 1/q_k - sum_{j in I_k} 1/p_j
  std::vector<ProbeRow> rows;
  bool slope_defined = false;
  double slope = 0.0;  // least-squares slope of log quotient vs log L
};

// Numerical divergence probe for a trivial block class. The witness is the
// textbook one: every slot of the violating block I_k receives the same unit
// vector repeated L times, every other slot receives a one-shot sequence, and
// the form is the diagonal form over I_k. The summing quotient
//   (block mixed norm of outputs) / (product of weak norms of inputs)
// then grows like L^{1/q_k - sum_{j in I_k} 1/p_j}, which is a positive power
// exactly when the class is trivial. Weak norms are computed numerically, so
// the reported slope checks the whole pipeline, not just the closed form.
inline ProbeReport triviality_probe(const ExponentVector& p,
                                    const ExponentVector& q,
                                    const BlockPartition& part,
                                    const std::vector<int>& lengths,
                                    const WeakNormOptions& wopt = {}) {
  const TrivialityResult tc = triviality_check(p, q, part);
  if (!tc.trivial) {
    throw std::invalid_argument(
        "class is not trivial: every block k has 1/q_k <= sum_{j in I_k} "
        "1/p_j");
  }
  ProbeReport report;
  report.witness_block = tc.witness_block;
  const int k = tc.witness_block;
  const std::vector<int>& wblock = part.block(k);
  report.reference_slope =
      q[static_cast<std::size_t>(k)].reciprocal() - harmonic_sum(p, wblock);

  const int m = part.m();
  const int d = part.d();
  std::vector<bool> in_witness(static_cast<std::size_t>(m), false);
  for (int axis : wblock) in_witness[static_cast<std::size_t>(axis)] = true;

  for (int L : lengths) {
    if (L < 1) throw std::invalid_argument("probe lengths must be >= 1");

    // diagonal form over the witness block; the other slots are 1-dim
    std::vector<int> dims(static_cast<std::size_t>(m), 1);
    for (int axis : wblock) dims[static_cast<std::size_t>(axis)] = L;
    CoefficientTensor tensor(dims);
    {
      std::vector<int> idx(static_cast<std::size_t>(m), 0);
      for (int i = 0; i < L; ++i) {
        for (int axis : wblock) idx[static_cast<std::size_t>(axis)] = i;
        tensor.at(std::span<const int>(idx.data(), idx.size())) = 1.0;
      }
    }
    FormInstance A(std::move(tensor), p);

    // input sequences: repeated e_1 on witness slots, one-shot elsewhere
    std::vector<VectorSequence> seqs;
    seqs.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const int n = dims[static_cast<std::size_t>(j)];
      VectorSequence s(L, n, p[static_cast<std::size_t>(j)]);
      if (in_witness[static_cast<std::size_t>(j)]) {
        for (int i = 0; i < L; ++i) s.row(i)[0] = 1.0;
      } else {
        s.row(0)[0] = 1.0;
      }
      seqs.push_back(std::move(s));
    }

    // outputs over the block index set
    CoefficientTensor out(std::vector<int>(static_cast<std::size_t>(d), L));
    {
      std::vector<int> bidx(static_cast<std::size_t>(d), 0);
      std::vector<std::vector<double>> xs(static_cast<std::size_t>(m));
      for (std::size_t lin = 0; lin < out.size(); ++lin) {
        for (int j = 0; j < m; ++j) {
          const int bi = bidx[static_cast<std::size_t>(part.block_of(j))];
          const std::span<const double> row =
              seqs[static_cast<std::size_t>(j)].row(bi);
          xs[static_cast<std::size_t>(j)].assign(row.begin(), row.end());
        }
        out.entries()[lin] = evaluate(A, xs);
        for (int a = d; a-- > 0;) {
          if (++bidx[static_cast<std::size_t>(a)] < L) break;
          bidx[static_cast<std::size_t>(a)] = 0;
        }
      }
    }

    ProbeRow row;
    row.length = L;
    row.lhs = mixed_norm(out, q);
    for (int j = 0; j < m; ++j) {
      const WeakNormResult w = weak_norm(seqs[static_cast<std::size_t>(j)],
                                         p[static_cast<std::size_t>(j)], wopt);
      row.weak_norms.push_back(w.value);
      row.weak_converged = row.weak_converged && w.converged;
      row.weak_product *= w.value;
    }
    if (row.weak_product <= 0.0) {
      throw std::domain_error("degenerate weak norm in probe");
    }
    row.quotient = row.lhs / row.weak_product;
    report.rows.push_back(std::move(row));
  }

  // least-squares slope of log quotient against log L
  std::vector<std::pair<double, double>> pts;
  for (const ProbeRow& r : report.rows) {
    if (r.quotient > 0.0) pts.emplace_back(std::log(r.length), std::log(r.quotient));
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : pts) {
    mean_x += x;
    mean_y += y;
  }
  if (!pts.empty()) {
    mean_x /= static_cast<double>(pts.size());
    mean_y /= static_cast<double>(pts.size());
  }
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (pts.size() >= 2 && sxx > 0.0) {
    report.slope_defined = true;
    report.slope = sxy / sxx;
  }
  return report;
}

}  // namespace blocksum
