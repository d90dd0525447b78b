#include "lhv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lhv {

namespace {

template <typename Eval>
SumRuleSides sides(double theta1, double theta2, double theta20, bool trivial, Eval&& eval) {
  SumRuleSides s;
  s.p_plain = eval(polarizer2_setting(theta1, theta2));
  s.p_bar = eval(Setting(theta1, theta2));
  if (trivial) {
    s.p_alt_plain = s.p_plain;
    s.p_alt_bar = s.p_bar;
  } else {
    s.p_alt_plain = eval(polarizer2_setting(theta1, theta20));
    s.p_alt_bar = eval(Setting(theta1, theta20));
  }
  return s;
}

bool same_mod_pi(double a, double b) { return std::abs(std::remainder(a - b, kPi)) < 1e-15; }

double leading_scale(const ModelParams& params) {
  const double eps = params.epsilon();
  return 3.0 / 16.0 * params.C() * params.C() * eps * eps;
}

}  // namespace

SumRuleReport fair_sampling_residual(double theta1, double theta2, double theta20,
                                     const ModelParams& params, const QuadratureSpec& quad) {
  SumRuleReport r;
  r.theta1 = canonical_angle(theta1);
  r.theta2 = canonical_angle(theta2);
  r.theta20 = canonical_angle(theta20);
  r.epsilon = params.epsilon();
  r.trivial = same_mod_pi(r.theta2, r.theta20);

  r.closed_form = sides(r.theta1, r.theta2, r.theta20, r.trivial, [&](const Setting& s) {
    return compute_p12_closed_form(s, params).value;
  });
  r.quadrature = sides(r.theta1, r.theta2, r.theta20, r.trivial, [&](const Setting& s) {
    return compute_p12_quadrature(s, params, quad).value;
  });
  r.leading_order = sides(r.theta1, r.theta2, r.theta20, r.trivial,
                          [&](const Setting& s) { return leading_order_p12(s, params); });
  return r;
}

ResidualScaling residual_scaling(double theta1, double theta2, double theta20,
                                 const ModelParams& params, const std::vector<double>& eps_list,
                                 const QuadratureSpec& quad) {
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw InvalidParameter("eps_list must be strictly decreasing");

  ResidualScaling out;
  for (double eps : eps_list) {
    const auto rep = fair_sampling_residual(theta1, theta2, theta20, params.with_epsilon(eps), quad);
    out.rows.push_back({eps, std::abs(rep.closed_form.residual()),
                        std::abs(rep.quadrature.residual()),
                        rep.closed_form.residual() / (eps * eps)});
  }

  out.below_floor = std::any_of(out.rows.begin(), out.rows.end(),
                                [](const auto& r) { return !(r.abs_residual > kResidualFloor); });
  if (!out.below_floor && out.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(out.rows.size());
    for (const auto& r : out.rows) {
      const double x = std::log(r.epsilon);
      const double y = std::log(r.abs_residual);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

std::string to_string(FactorizationMode m) {
  return m == FactorizationMode::raw ? "raw" : "renormalized";
}

std::string to_string(RatioStatus s) {
  switch (s) {
    case RatioStatus::finite:
      return "finite";
    case RatioStatus::infinite:
      return "infinite";
    case RatioStatus::undefined:
      return "undefined";
  }
  return "unknown";
}

FactorizationReport apply_factorization(const FactorJoints& joints, double marginal,
                                        FactorizationMode mode) {
  if (!(marginal > 0.0)) throw InvalidParameter("factorization needs a nonzero marginal");
  FactorizationReport r;
  r.mode = mode;
  r.marginal = marginal;
  r.joints = joints;
  if (mode == FactorizationMode::renormalized) {
    const double m = std::max({joints.p_1_2, joints.p_1_20, joints.p_10_2, joints.p_10_20});
    if (m > 0.0) {
      r.joints.p_1_2 /= m;
      r.joints.p_1_20 /= m;
      r.joints.p_10_2 /= m;
      r.joints.p_10_20 /= m;
    }
  }
  r.cond_20_given_1 = r.joints.p_1_20 / marginal;
  r.cond_10_given_2 = r.joints.p_10_2 / marginal;
  r.lhs = r.joints.p_10_20;
  r.rhs = r.joints.p_1_2 * r.cond_20_given_1 * r.cond_10_given_2;
  if (r.lhs != 0.0) {
    r.ratio = r.rhs / r.lhs;
    r.status = RatioStatus::finite;
  } else {
    r.status = r.rhs != 0.0 ? RatioStatus::infinite : RatioStatus::undefined;
  }
  return r;
}

FactorizationReport factorization_check(const HardySettings& hs, const ModelParams& params,
                                        FactorizationMode mode, JointEvaluator evaluator) {
  const auto joint = [&](double a, double b) {
    const Setting s(a, b);
    return evaluator == JointEvaluator::closed_form ? compute_p12_closed_form(s, params).value
                                                    : leading_order_p12(s, params);
  };
  FactorJoints j;
  j.p_1_2 = joint(hs.theta1, hs.theta2);
  j.p_1_20 = joint(hs.theta1, hs.theta20);
  j.p_10_2 = joint(hs.theta10, hs.theta2);
  j.p_10_20 = joint(hs.theta10, hs.theta20);
  return apply_factorization(j, marginal_exact(params), mode);
}

std::string to_string(HardyLayout l) { return l == HardyLayout::hardy ? "hardy" : "grid"; }

std::string to_string(NormalizationFit f) {
  return f == NormalizationFit::max_entry ? "max" : "least-squares";
}

std::array<HardyPair, 4> hardy_pairs(const HardySettings& hs, HardyLayout layout) {
  const double h = kPi / 2.0;
  if (layout == HardyLayout::grid) {
    return {{{"P(t1,t2)", Setting(hs.theta1, hs.theta2)},
             {"P(t1,t20)", Setting(hs.theta1, hs.theta20)},
             {"P(t10,t2)", Setting(hs.theta10, hs.theta2)},
             {"P(t10,t20)", Setting(hs.theta10, hs.theta20)}}};
  }
  return {{{"P(t1,t2)", Setting(hs.theta1, hs.theta2)},
           {"P(t1+pi/2,t20)", Setting(hs.theta1 + h, hs.theta20)},
           {"P(t10,t2+pi/2)", Setting(hs.theta10, hs.theta2 + h)},
           {"P(t10,t20)", Setting(hs.theta10, hs.theta20)}}};
}

HardySettings hardy_zero_settings(double theta1, double gamma) {
  // The quantum prediction is symmetric in its two angles, so the same root
  // finder serves both arms.
  const double h = kPi / 2.0;
  HardySettings hs;
  hs.theta1 = canonical_angle(theta1);
  hs.theta2 = zero_condition_angle(hs.theta1, gamma);
  hs.theta20 = zero_condition_angle(hs.theta1 + h, gamma);
  hs.theta10 = zero_condition_angle(hs.theta2 + h, gamma);
  return hs;
}

int HardyReport::quantum_zero_count() const {
  return static_cast<int>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.quantum_near_zero; }));
}

int HardyReport::lhv_zero_count() const {
  return static_cast<int>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.lhv_near_zero; }));
}

HardyReport hardy_report(const HardySettings& hs, const ModelParams& params, NormalizationFit fit,
                         HardyLayout layout, double N) {
  if (!(N > 0.0)) throw InvalidParameter("N must be positive");
  HardyReport rep;
  rep.layout = layout;
  rep.fit = fit;
  rep.epsilon = params.epsilon();
  const double scale = leading_scale(params);
  const auto pairs = hardy_pairs(hs, layout);

  for (std::size_t i = 0; i < 4; ++i) {
    auto& e = rep.entries[i];
    e.pair = pairs[i];
    e.quantum = quantum_prediction(e.pair.setting, params.gamma(), N);
    e.lhv = compute_p12_closed_form(e.pair.setting, params).value;
    e.lhv_shape = e.lhv / scale;
    // On the zero manifold the leading order is pure rounding noise; no ratio then.
    const double lead = leading_order_p12(e.pair.setting, params);
    if (lead > 1e-15 * scale) e.lhv_over_leading = e.lhv / lead;
    e.quantum_near_zero = e.quantum / N <= params.epsilon();
    e.lhv_near_zero = e.lhv_shape <= params.epsilon();
  }

  double q_max = 0.0;
  double l_max = 0.0;
  for (const auto& e : rep.entries) {
    q_max = std::max(q_max, e.quantum);
    l_max = std::max(l_max, e.lhv);
  }
  if (fit == NormalizationFit::least_squares) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& e : rep.entries) {
      num += e.quantum * e.lhv;
      den += e.quantum * e.quantum;
    }
    rep.quantum_scale = den > 0.0 ? num / den : 0.0;
    for (auto& e : rep.entries) {
      e.quantum_normalized = l_max > 0.0 ? rep.quantum_scale * e.quantum / l_max : 0.0;
      e.lhv_normalized = l_max > 0.0 ? e.lhv / l_max : 0.0;
    }
  } else {
    for (auto& e : rep.entries) {
      e.quantum_normalized = q_max > 0.0 ? e.quantum / q_max : 0.0;
      e.lhv_normalized = l_max > 0.0 ? e.lhv / l_max : 0.0;
    }
  }
  for (auto& e : rep.entries) e.deviation = e.lhv_normalized - e.quantum_normalized;
  return rep;
}

}  // namespace lhv
