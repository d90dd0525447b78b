#include "lhv/commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

namespace lhv {

namespace {

constexpr const char* kPolarizer2Convention =
    "setting (t1,t2) = polarizer 2 physically at t2+pi/2; physical angle chi uses r2 = (sin(chi-pi/2),0,cos(chi-pi/2))";

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format_number(xs[i]);
  }
  return out;
}

Cell opt(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return std::monostate{};
}

ReportTable make_table(const RunConfig& cfg) {
  ReportTable t;
  t.name = to_string(cfg.command);
  t.schema = schema_for(cfg.command);
  t.add_meta("tool_version", std::string(kToolVersion));
  t.add_meta("subcommand", to_string(cfg.command));
  t.add_meta("angle_unit", std::string("rad"));
  t.add_meta("r_sq", cfg.beam_splitter.r_sq);
  t.add_meta("t_sq", cfg.beam_splitter.t_sq);
  t.add_meta("swapped", cfg.swapped);
  t.add_meta("gamma", cfg.gamma);
  t.add_meta("phi", cfg.phi);
  t.add_meta("C", cfg.C);
  t.add_meta("epsilon", join_numbers(cfg.epsilons));
  t.add_meta("N", cfg.N);
  t.add_meta("seed", static_cast<std::int64_t>(cfg.mc.seed));
  t.add_meta("n_samples", static_cast<std::int64_t>(cfg.mc.n_samples));
  t.add_meta("n_chunks", static_cast<std::int64_t>(cfg.mc.n_chunks));
  t.add_meta("n_radial", static_cast<std::int64_t>(cfg.quad.n_radial));
  t.add_meta("n_azimuthal", static_cast<std::int64_t>(cfg.quad.n_azimuthal));
  t.add_meta("polarizer2_convention", std::string(kPolarizer2Convention));
  bool large_cap = false;
  for (double e : cfg.epsilons) large_cap = large_cap || e > kSmallCapEpsilon;
  t.add_meta("small_cap_warning", large_cap);
  return t;
}

void add_hardy_meta(ReportTable& t, const RunConfig& cfg) {
  const auto& hs = *cfg.hardy;
  t.add_meta("hardy_theta1", hs.theta1);
  t.add_meta("hardy_theta2", hs.theta2);
  t.add_meta("hardy_theta10", hs.theta10);
  t.add_meta("hardy_theta20", hs.theta20);
  t.add_meta("hardy_constructed_from_zeros", cfg.hardy_zero_theta1.has_value());
}

void check_oracle(double quad, double closed, const std::string& where) {
  if (!(std::abs(quad - closed) <= kOracleTolerance)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "quadrature %.12e vs closed form %.12e", quad, closed);
    throw NumericalContractViolation(where + ": " + buf);
  }
}

}  // namespace

std::vector<std::string> schema_for(Subcommand command) {
  switch (command) {
    case Subcommand::predict:
      return {"epsilon", "theta1", "theta2", "bar_theta2", "quantum", "leading_order"};
    case Subcommand::simulate:
      return {"epsilon",     "theta1",       "theta2",  "quantum",        "mc_value",
              "mc_std_error", "mc_hits",     "quadrature", "closed_form", "leading_order",
              "closed_over_leading", "mc_z_score", "low_hit_flag"};
    case Subcommand::fair_sampling:
      return {"theta1",          "theta2",          "theta20",         "epsilon",
              "trivial",         "lhs_closed_form", "rhs_closed_form", "residual_closed_form",
              "lhs_quadrature",  "rhs_quadrature",  "residual_quadrature", "residual_leading_order",
              "abs_residual",    "residual_over_eps_sq", "at_floor",   "log_slope",
              "scaling_below_floor"};
    case Subcommand::factorization:
      return {"epsilon", "mode",     "p_1_2", "p_1_20",          "p_10_2",          "p_10_20", "marginal",
              "cond_20_given_1", "cond_10_given_2", "lhs", "rhs", "ratio", "ratio_status"};
    case Subcommand::hardy:
      return {"epsilon",        "pair",          "theta1",          "theta2",     "quantum",
              "quantum_normalized", "lhv_closed_form", "lhv_normalized", "lhv_over_leading",
              "lhv_shape",      "deviation",     "quantum_near_zero", "lhv_near_zero"};
  }
  return {};
}

ReportTable run_predict(const RunConfig& cfg) {
  ReportTable t = make_table(cfg);
  for (double eps : cfg.epsilons) {
    const auto params = cfg.params(eps);
    for (const auto& s : cfg.settings)
      t.add_row({eps, s.theta1(), s.theta2(), s.bar_theta2(), quantum_prediction(s, cfg.gamma, cfg.N),
                 leading_order_p12(s, params)});
  }
  return t;
}

ReportTable run_simulate(const RunConfig& cfg) {
  ReportTable t = make_table(cfg);
  t.add_meta("mc_row_seed", std::string("row k uses chunk_seed(seed, k) as its master seed"));
  std::uint64_t row = 0;
  for (double eps : cfg.epsilons) {
    const auto params = cfg.params(eps);
    for (const auto& s : cfg.settings) {
      McSpec mc = cfg.mc;
      mc.seed = chunk_seed(cfg.mc.seed, row);
      const auto est = estimate_p12_mc(s, params, mc);
      const double quad = compute_p12_quadrature(s, params, cfg.quad).value;
      const double closed = compute_p12_closed_form(s, params).value;
      const double lead = leading_order_p12(s, params);
      check_oracle(quad, closed, "simulate row " + std::to_string(row));
      std::optional<double> ratio;
      if (lead > 0.0) ratio = closed / lead;
      std::optional<double> z;
      if (est.std_error > 0.0) z = (est.value - closed) / est.std_error;
      t.add_row({eps, s.theta1(), s.theta2(), quantum_prediction(s, cfg.gamma, cfg.N), est.value, est.std_error,
                 static_cast<std::int64_t>(est.hits), quad, closed, lead, opt(ratio), opt(z), est.low_hit_count});
      ++row;
    }
  }
  return t;
}

ReportTable run_fair_sampling(const RunConfig& cfg) {
  ReportTable t = make_table(cfg);
  t.add_meta("residual_floor", kResidualFloor);
  t.add_meta("note",
             std::string("unbarred P12(t1,t2) uses Setting(t1, t2-pi/2); under this convention the exact "
                         "residual cancels identically, so at_floor=true contradicts a nonzero higher-order "
                         "residual and depends on the convention"));
  for (const auto& tup : cfg.sum_rule_tuples) {
    const auto scaling =
        residual_scaling(tup.theta1, tup.theta2, tup.theta20, cfg.params(cfg.epsilons.front()), cfg.epsilons, cfg.quad);
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
      const double eps = cfg.epsilons[i];
      const auto rep = fair_sampling_residual(tup.theta1, tup.theta2, tup.theta20, cfg.params(eps), cfg.quad);
      const auto& cf = rep.closed_form;
      const auto& qd = rep.quadrature;
      const std::string where = "fair-sampling tuple (" + format_number(tup.theta1) + ", " +
                                format_number(tup.theta2) + ", " + format_number(tup.theta20) + ")";
      check_oracle(qd.p_plain, cf.p_plain, where);
      check_oracle(qd.p_bar, cf.p_bar, where);
      check_oracle(qd.p_alt_plain, cf.p_alt_plain, where);
      check_oracle(qd.p_alt_bar, cf.p_alt_bar, where);
      const auto& row = scaling.rows[i];
      t.add_row({rep.theta1, rep.theta2, rep.theta20, eps, rep.trivial, cf.lhs(), cf.rhs(), cf.residual(), qd.lhs(),
                 qd.rhs(), qd.residual(), rep.leading_order.residual(), row.abs_residual, row.residual_over_eps_sq,
                 rep.at_floor(), opt(scaling.log_slope), scaling.below_floor});
    }
  }
  return t;
}

ReportTable run_factorization(const RunConfig& cfg) {
  ReportTable t = make_table(cfg);
  add_hardy_meta(t, cfg);
  t.add_meta("conditional", std::string("P12(a|b) = joint / (C eps / 4)"));
  for (double eps : cfg.epsilons) {
    const auto params = cfg.params(eps);
    for (auto mode : {FactorizationMode::raw, FactorizationMode::renormalized}) {
      const auto r = factorization_check(*cfg.hardy, params, mode);
      t.add_row({eps, to_string(mode), r.joints.p_1_2, r.joints.p_1_20, r.joints.p_10_2, r.joints.p_10_20, r.marginal,
                 r.cond_20_given_1, r.cond_10_given_2, r.lhs, r.rhs, opt(r.ratio), to_string(r.status)});
    }
  }
  return t;
}

ReportTable run_hardy(const RunConfig& cfg) {
  ReportTable t = make_table(cfg);
  add_hardy_meta(t, cfg);
  t.add_meta("layout", to_string(cfg.hardy_layout));
  t.add_meta("fit", to_string(cfg.fit));
  t.add_meta("near_zero_rule", std::string("shape value <= epsilon (quantum/N, lhv/((3/16)C^2 eps^2))"));
  for (double eps : cfg.epsilons) {
    const auto rep = hardy_report(*cfg.hardy, cfg.params(eps), cfg.fit, cfg.hardy_layout, cfg.N);
    for (const auto& e : rep.entries)
      t.add_row({eps, e.pair.label, e.pair.setting.theta1(), e.pair.setting.theta2(), e.quantum, e.quantum_normalized,
                 e.lhv, e.lhv_normalized, opt(e.lhv_over_leading), e.lhv_shape, e.deviation, e.quantum_near_zero,
                 e.lhv_near_zero});
  }
  return t;
}

ReportTable run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Subcommand::predict:
      return run_predict(cfg);
    case Subcommand::simulate:
      return run_simulate(cfg);
    case Subcommand::fair_sampling:
      return run_fair_sampling(cfg);
    case Subcommand::factorization:
      return run_factorization(cfg);
    case Subcommand::hardy:
      return run_hardy(cfg);
  }
  throw std::logic_error("unknown subcommand");
}

std::string render(const ReportTable& table, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(table) : to_json(table);
}

std::vector<std::string> config_warnings(const RunConfig& cfg) {
  std::vector<std::string> out;
  for (double e : cfg.epsilons)
    if (e > kSmallCapEpsilon)
      out.push_back("epsilon " + format_number(e) + " exceeds 0.2; O(eps^3) corrections are not small");
  if (cfg.command == Subcommand::simulate) {
    for (double e : cfg.epsilons) {
      // rough expected coincidence count at the largest possible overlap
      const double expected = 3.0 / 16.0 * cfg.C * cfg.C * e * e * static_cast<double>(cfg.mc.n_samples);
      if (expected < static_cast<double>(kLowHitThreshold))
        out.push_back("n_samples too small for epsilon " + format_number(e) + ": expect fewer than " +
                      std::to_string(kLowHitThreshold) + " coincidences per setting");
    }
  }
  return out;
}

}  // namespace lhv
