// blocksum command line: exponent calculus, mixed norms, form norm
// estimation, inequality verification, sweeps and divergence probes.
//
// Exit codes: 0 ok, 1 I/O failure, 2 validation failure, 3 numerical
// non-convergence under --strict.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blocksum/blocksum.hpp"

namespace {

using nlohmann::json;

struct StrictNonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json norm_estimate_to_json(const blocksum::NormEstimate& est,
                           bool with_maximizer) {
  json j;
  j["value"] = est.value;
  j["method"] = blocksum::norm_method_name(est.method);
  j["converged"] = est.converged;
  j["restarts_used"] = est.restarts_used;
  j["sweeps"] = est.sweeps;
  if (with_maximizer) j["maximizer"] = est.maximizer;
  return j;
}

// Loads a form: tensor file plus --p, or a file that already carries "p".
blocksum::FormInstance load_form(const std::string& input,
                                 const std::string& p_spec) {
  const json j = blocksum::read_json_file(input);
  blocksum::CoefficientTensor tensor = blocksum::tensor_from_json(j);
  blocksum::ExponentVector p;
  if (!p_spec.empty()) {
    p = blocksum::parse_exponent_list(p_spec);
  } else if (j.contains("p")) {
    p = blocksum::exponents_from_json(j.at("p"));
  } else {
    throw std::invalid_argument(
        "no domain exponents: pass --p or store \"p\" in the input file");
  }
  return blocksum::FormInstance(std::move(tensor), std::move(p));
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    blocksum::write_text_atomic(out_path, text);
  }
}

int cmd_exponents(const std::string& p_spec, const std::string& part_spec,
                  const std::string& rule, int m_flag,
                  const std::string& r_spec, const std::string& q_spec) {
  using namespace blocksum;
  const ExponentVector p = parse_exponent_list(p_spec);
  json out;
  out["rule"] = rule;
  out["partition"] = part_spec;

  if (rule == "corollary") {
    const BlockPartition part =
        parse_partition(part_spec, m_flag > 0 ? m_flag : -1);
    std::vector<int> sizes;
    for (int k = 0; k < part.d(); ++k) {
      sizes.push_back(static_cast<int>(part.block(k).size()));
    }
    Exponent ps = p.front();
    for (const Exponent& e : p) {
      if (e != ps) {
        throw std::invalid_argument(
            "rule \"corollary\" needs a single p (or equal entries)");
      }
    }
    const ExponentVector s = corollary_exponents(ps, sizes);
    out["p"] = exponent_to_json(ps);
    out["block_sizes"] = sizes;
    out["s"] = exponents_to_json(s);
    out["hypotheses"] = {{"m", part.m()},
                         {"m_lt_p", true},
                         {"p_le_2m", true}};
    emit(out, "");
    return 0;
  }

  const int expect_m = m_flag > 0 ? m_flag : static_cast<int>(p.size());
  const BlockPartition part = parse_partition(part_spec, expect_m);
  out["p"] = exponents_to_json(p);

  if (rule == "hl-block") {
    const ExponentVector s = hl_block_exponents(p, part);
    out["s"] = exponents_to_json(s);
    out["hypotheses"] = {{"p_in_range", true},
                         {"harmonic_sum", harmonic_sum(p)},
                         {"harmonic_sum_lt_1", true}};
  } else if (rule == "isotropic") {
    const IsotropicHlExponent iso = isotropic_hl_exponent(p);
    out["s"] = exponents_to_json(
        ExponentVector(static_cast<std::size_t>(part.d()), iso.s));
    out["hypotheses"] = {{"harmonic_sum", harmonic_sum(p)},
                         {"range", hl_range_name(iso.range)}};
  } else if (rule == "inclusion") {
    if (r_spec.empty() || q_spec.empty()) {
      throw std::invalid_argument("rule \"inclusion\" needs --r and --q");
    }
    const Exponent r = parse_exponent(r_spec);
    const ExponentVector q = parse_exponent_list(q_spec);
    const InclusionResult res = inclusion_exponents(r, p, q, part);
    out["r"] = exponent_to_json(r);
    out["q"] = exponents_to_json(q);
    out["s"] = exponents_to_json(res.s);
    out["hypotheses"] = {{"hypothesis", std::string(1, res.hypothesis)},
                         {"balance", res.balance}};
  } else {
    throw std::invalid_argument("unknown rule '" + rule + "'");
  }
  emit(out, "");
  return 0;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const StrictNonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const blocksum::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blocksum: block summability norms, exponents and sweeps"};
  app.require_subcommand(1);

  // --- exponents ---
  auto* exp_cmd = app.add_subcommand(
      "exponents", "closed-form exponent systems for a block partition");
  std::string e_p, e_part, e_rule, e_r, e_q;
  int e_m = 0;
  exp_cmd->add_option("--p", e_p, "domain exponents, e.g. 4,4,4")->required();
  exp_cmd->add_option("--partition", e_part, "blocks, e.g. \"1,2|3\"")
      ->required();
  exp_cmd
      ->add_option("--rule", e_rule,
                   "one of hl-block | isotropic | corollary | inclusion")
      ->required()
      ->check(CLI::IsMember({"hl-block", "isotropic", "corollary",
                             "inclusion"}));
  exp_cmd->add_option("--m", e_m, "arity cross-check");
  exp_cmd->add_option("--r", e_r, "input exponent r (rule inclusion)");
  exp_cmd->add_option("--q", e_q, "target exponents q (rule inclusion)");

  // --- mixed-norm ---
  auto* mix_cmd =
      app.add_subcommand("mixed-norm", "anisotropic mixed norm of a tensor");
  std::string m_input, m_s, m_out;
  mix_cmd->add_option("--input", m_input, "tensor JSON file")->required();
  mix_cmd->add_option("--s", m_s, "exponents, innermost last, e.g. 1,2")
      ->required();
  mix_cmd->add_option("--out", m_out, "write JSON here instead of stdout");

  // --- form-norm ---
  auto* form_cmd = app.add_subcommand(
      "form-norm", "norm estimate of a multilinear form on l_p balls");
  std::string f_input, f_p, f_out;
  blocksum::NormConfig f_cfg;
  bool f_strict = false;
  bool f_no_exact = false;
  form_cmd->add_option("--input", f_input, "tensor or form JSON file")
      ->required();
  form_cmd->add_option("--p", f_p, "domain exponents (overrides file)");
  form_cmd->add_option("--restarts", f_cfg.restarts, "ascent restarts");
  form_cmd->add_option("--tol", f_cfg.tol, "relative gain stop tolerance");
  form_cmd->add_option("--max-iter", f_cfg.max_iter, "sweep budget");
  form_cmd->add_option("--seed", f_cfg.seed, "restart seed");
  form_cmd->add_option("--exact-budget", f_cfg.exact_budget_bits,
                       "sign-enumeration budget in bits");
  form_cmd->add_flag("--no-exact", f_no_exact,
                     "never use exact sign enumeration");
  form_cmd->add_flag("--strict", f_strict, "exit 3 on non-convergence");
  form_cmd->add_option("--out", f_out, "write JSON here instead of stdout");

  // --- verify-hl ---
  auto* ver_cmd = app.add_subcommand(
      "verify-hl",
      "left side, norm estimate and ratio of the block inequality");
  std::string v_input, v_p, v_part, v_rule = "hl-block", v_s, v_out;
  blocksum::NormConfig v_cfg;
  bool v_strict = false;
  ver_cmd->add_option("--input", v_input, "tensor or form JSON file")
      ->required();
  ver_cmd->add_option("--p", v_p, "domain exponents (overrides file)");
  ver_cmd->add_option("--partition", v_part, "blocks, e.g. \"1,2|3\"")
      ->required();
  ver_cmd->add_option("--rule", v_rule, "hl-block | isotropic | custom")
      ->check(CLI::IsMember({"hl-block", "isotropic", "custom"}));
  ver_cmd->add_option("--s", v_s, "exponents for rule custom");
  ver_cmd->add_option("--restarts", v_cfg.restarts, "ascent restarts");
  ver_cmd->add_option("--tol", v_cfg.tol, "relative gain stop tolerance");
  ver_cmd->add_option("--max-iter", v_cfg.max_iter, "sweep budget");
  ver_cmd->add_option("--seed", v_cfg.seed, "restart seed");
  ver_cmd->add_flag("--strict", v_strict, "exit 3 on non-convergence");
  ver_cmd->add_option("--out", v_out, "write JSON here instead of stdout");

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "deterministic experiment sweep to CSV plus JSON sidecar");
  std::string s_config, s_out;
  sweep_cmd->add_option("--config", s_config, "sweep config JSON")->required();
  sweep_cmd->add_option("--out", s_out, "CSV output path")->required();

  // --- probe-trivial ---
  auto* probe_cmd = app.add_subcommand(
      "probe-trivial", "divergence probe for a trivial block class");
  std::string t_p, t_q, t_part, t_L, t_out;
  blocksum::WeakNormOptions t_wopt;
  probe_cmd->add_option("--p", t_p, "domain exponents")->required();
  probe_cmd->add_option("--q", t_q, "output exponents, one per block")
      ->required();
  probe_cmd->add_option("--partition", t_part, "blocks, e.g. \"1,2\"")
      ->required();
  probe_cmd->add_option("--L", t_L, "sequence lengths, e.g. 8,16,32,64")
      ->required();
  probe_cmd->add_option("--restarts", t_wopt.restarts, "weak-norm restarts");
  probe_cmd->add_option("--tol", t_wopt.tol, "weak-norm tolerance");
  probe_cmd->add_option("--max-iter", t_wopt.max_iter, "weak-norm budget");
  probe_cmd->add_option("--seed", t_wopt.seed, "weak-norm seed");
  probe_cmd->add_option("--out", t_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (exp_cmd->parsed()) {
    return run_guarded(
        [&] { return cmd_exponents(e_p, e_part, e_rule, e_m, e_r, e_q); });
  }

  if (mix_cmd->parsed()) {
    return run_guarded([&] {
      const blocksum::CoefficientTensor t =
          blocksum::tensor_from_json(blocksum::read_json_file(m_input));
      const blocksum::ExponentVector s = blocksum::parse_exponent_list(m_s);
      json out;
      out["value"] = blocksum::mixed_norm(t, s);
      out["dims"] = t.dims();
      out["s"] = blocksum::exponents_to_json(s);
      emit(out, m_out);
      return 0;
    });
  }

  if (form_cmd->parsed()) {
    return run_guarded([&] {
      blocksum::FormInstance A = load_form(f_input, f_p);
      blocksum::NormConfig cfg = f_cfg;
      cfg.prefer_exact = !f_no_exact;
      const blocksum::NormEstimate est = blocksum::estimate_norm(A, cfg);
      if (f_strict && !est.converged) {
        throw StrictNonConvergence("norm estimate did not converge");
      }
      json out = norm_estimate_to_json(est, true);
      out["p"] = blocksum::exponents_to_json(A.domain);
      out["options"] = {{"restarts", cfg.restarts},
                        {"tol", cfg.tol},
                        {"max_iter", cfg.max_iter},
                        {"seed", cfg.seed},
                        {"prefer_exact", cfg.prefer_exact},
                        {"exact_budget_bits", cfg.exact_budget_bits}};
      emit(out, f_out);
      std::cerr << "norm >= " << blocksum::format_g6(est.value) << " ("
                << blocksum::norm_method_name(est.method)
                << (est.converged ? "" : ", not converged") << ")\n";
      return 0;
    });
  }

  if (ver_cmd->parsed()) {
    return run_guarded([&] {
      using namespace blocksum;
      FormInstance A = load_form(v_input, v_p);
      const BlockPartition part =
          parse_partition(v_part, A.tensor.order());
      ExponentVector s;
      if (v_rule == "hl-block") {
        s = hl_block_exponents(A.domain, part);
      } else if (v_rule == "isotropic") {
        const Exponent rho = isotropic_hl_exponent(A.domain).s;
        s.assign(static_cast<std::size_t>(part.d()), rho);
      } else {
        if (v_s.empty()) {
          throw std::invalid_argument("rule \"custom\" needs --s");
        }
        s = parse_exponent_list(v_s);
      }
      const RatioResult res = hl_ratio(A, part, s, v_cfg);
      if (v_strict && !res.norm.converged) {
        throw StrictNonConvergence("norm estimate did not converge");
      }
      json out;
      out["rule"] = v_rule;
      out["s"] = exponents_to_json(s);
      out["lhs"] = res.lhs;
      out["norm"] = norm_estimate_to_json(res.norm, false);
      out["ratio"] = res.ratio;
      if (v_rule == "hl-block") {
        const AnisotropyGain gain = anisotropy_gain(A, part, A.domain);
        out["isotropic"] = {
            {"s", exponents_to_json(gain.s_iso)},
            {"lhs", gain.lhs_iso},
        };
        out["anisotropy_gain"] = gain.lhs_aniso - gain.lhs_iso;
      }
      emit(out, v_out);
      std::cerr << "lhs " << format_g6(res.lhs) << ", norm "
                << format_g6(res.norm.value) << ", ratio "
                << format_g6(res.ratio) << "\n";
      return 0;
    });
  }

  if (sweep_cmd->parsed()) {
    return run_guarded([&] {
      using namespace blocksum;
      const SweepConfig cfg =
          sweep_config_from_json(read_json_file(s_config));
      const SweepReport report = sweep(cfg);
      write_text_atomic(s_out, report.csv);
      const std::string sidecar_path = s_out + ".json";
      write_text_atomic(sidecar_path, sweep_sidecar(report).dump(2) + "\n");
      json out;
      out["out"] = s_out;
      out["sidecar"] = sidecar_path;
      out["rows"] = report.rows.size();
      out["content_hash"] = report.content_hash;
      std::cout << out.dump(2) << "\n";
      std::cerr << report.rows.size() << " rows -> " << s_out << " (hash "
                << report.content_hash << ")\n";
      return 0;
    });
  }

  if (probe_cmd->parsed()) {
    return run_guarded([&] {
      using namespace blocksum;
      const ExponentVector p = parse_exponent_list(t_p);
      const ExponentVector q = parse_exponent_list(t_q);
      const BlockPartition part =
          parse_partition(t_part, static_cast<int>(p.size()));
      const std::vector<int> grid = parse_int_list(t_L);
      const ProbeReport report = triviality_probe(p, q, part, grid, t_wopt);
      json out;
      out["witness_block"] = report.witness_block + 1;  // 1-based, as --partition
      out["reference_slope"] = report.reference_slope;
      if (report.slope_defined) {
        out["slope"] = report.slope;
      } else {
        out["slope"] = nullptr;
        out["slope_note"] = "undefined: need at least two distinct lengths";
      }
      json rows = json::array();
      for (const ProbeRow& r : report.rows) {
        rows.push_back({{"L", r.length},
                        {"lhs", r.lhs},
                        {"weak_norms", r.weak_norms},
                        {"quotient", r.quotient},
                        {"weak_converged", r.weak_converged}});
      }
      out["rows"] = rows;
      emit(out, t_out);
      if (report.slope_defined) {
        std::cerr << "slope " << format_g6(report.slope) << " (reference "
                  << format_g6(report.reference_slope) << ")\n";
      } else {
        std::cerr << "slope undefined: need two or more distinct lengths\n";
      }
      return 0;
    });
  }

  return 0;
}
