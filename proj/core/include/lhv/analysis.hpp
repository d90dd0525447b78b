#pragma once

// Measurable versions of the two objections to the Hardy-type experiment:
// the fair-sampling sum rule and the factorization of conditional probabilities,
// together with the four-probability Hardy table.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lhv/integration.hpp"
#include "lhv/model.hpp"

namespace lhv {

/// Residuals below this are indistinguishable from quadrature rounding noise.
inline constexpr double kResidualFloor = 1e-13;

// ---------------------------------------------------------------------------
// Sum rule
//   P12(t1, t2) + P12(t1, bar t2) = P12(t1, t20) + P12(t1, bar t20)
// Unbarred probabilities put polarizer 2 physically at t2, i.e. Setting(t1, t2 - pi/2);
// barred ones are Setting(t1, t2).

struct SumRuleSides {
  double p_plain = 0.0;      // P12(t1, t2)
  double p_bar = 0.0;        // P12(t1, bar t2)
  double p_alt_plain = 0.0;  // P12(t1, t20)
  double p_alt_bar = 0.0;    // P12(t1, bar t20)

  double lhs() const { return p_plain + p_bar; }
  double rhs() const { return p_alt_plain + p_alt_bar; }
  double residual() const { return lhs() - rhs(); }
};

struct SumRuleReport {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta20 = 0.0;
  double epsilon = 0.0;
  bool trivial = false;  // theta2 == theta20 (mod pi)

  SumRuleSides closed_form;
  SumRuleSides quadrature;
  SumRuleSides leading_order;

  double lhs() const { return closed_form.lhs(); }
  double rhs() const { return closed_form.rhs(); }
  double residual() const { return closed_form.residual(); }
  bool at_floor() const {
    return std::abs(closed_form.residual()) < kResidualFloor &&
           std::abs(quadrature.residual()) < kResidualFloor;
  }
};

SumRuleReport fair_sampling_residual(double theta1, double theta2, double theta20,
                                     const ModelParams& params, const QuadratureSpec& quad = {});

struct ResidualScalingRow {
  double epsilon = 0.0;
  double abs_residual = 0.0;             // closed form
  double abs_residual_quadrature = 0.0;
  double residual_over_eps_sq = 0.0;     // signed closed-form residual / eps^2
};

struct ResidualScaling {
  std::vector<ResidualScalingRow> rows;
  bool below_floor = false;          // some residual < kResidualFloor: no slope
  std::optional<double> log_slope;   // d log|residual| / d log eps
};

/// eps_list must be strictly decreasing with every entry in (0, 2].
ResidualScaling residual_scaling(double theta1, double theta2, double theta20,
                                 const ModelParams& params, const std::vector<double>& eps_list,
                                 const QuadratureSpec& quad = {});

// ---------------------------------------------------------------------------
// Factorization  P12(t10, t20) =? P12(t1, t2) P12(t20 | t1) P12(t10 | t2)
// Joints are evaluated at Setting(ta, tb); conditionals are joint / marginal.

enum class FactorizationMode { raw, renormalized };
enum class JointEvaluator { closed_form, leading_order };
enum class RatioStatus { finite, infinite, undefined };

std::string to_string(FactorizationMode m);
std::string to_string(RatioStatus s);

struct FactorJoints {
  double p_1_2 = 0.0;    // P12(t1, t2)
  double p_1_20 = 0.0;   // P12(t1, t20)
  double p_10_2 = 0.0;   // P12(t10, t2)
  double p_10_20 = 0.0;  // P12(t10, t20)
};

struct FactorizationReport {
  FactorizationMode mode = FactorizationMode::raw;
  FactorJoints joints;  // after renormalization, if any
  double marginal = 0.0;
  double cond_20_given_1 = 0.0;
  double cond_10_given_2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;  // rhs / lhs, present only when finite
  RatioStatus status = RatioStatus::finite;
};

/// Applies the factorization to given joints and marginal. Throws on a zero marginal.
FactorizationReport apply_factorization(const FactorJoints& joints, double marginal,
                                        FactorizationMode mode);

FactorizationReport factorization_check(const HardySettings& hs, const ModelParams& params,
                                        FactorizationMode mode,
                                        JointEvaluator evaluator = JointEvaluator::closed_form);

// ---------------------------------------------------------------------------
// Hardy table

/// `hardy` evaluates (t1, t2), (t1 + pi/2, t20), (t10, t2 + pi/2), (t10, t20): the first
/// three are the probabilities Hardy's argument needs to vanish, the last must not.
/// `grid` evaluates the plain pairs (t1, t2), (t1, t20), (t10, t2), (t10, t20).
enum class HardyLayout { hardy, grid };
enum class NormalizationFit { max_entry, least_squares };

std::string to_string(HardyLayout l);
std::string to_string(NormalizationFit f);

struct HardyPair {
  std::string label;
  Setting setting;
};

std::array<HardyPair, 4> hardy_pairs(const HardySettings& hs, HardyLayout layout);

/// Settings whose first three Hardy-layout pairs are exact zeros of the quantum
/// prediction, built from zero_condition_angle starting at theta1.
HardySettings hardy_zero_settings(double theta1, double gamma);

struct HardyEntry {
  HardyPair pair;
  double quantum = 0.0;             // N (...)^2
  double quantum_normalized = 0.0;
  double lhv = 0.0;                 // closed form
  double lhv_normalized = 0.0;
  double lhv_shape = 0.0;           // lhv / ((3/16) C^2 eps^2)
  std::optional<double> lhv_over_leading;  // absent when the leading order is at rounding level
  double deviation = 0.0;           // lhv_normalized - quantum_normalized
  bool quantum_near_zero = false;
  bool lhv_near_zero = false;
};

struct HardyReport {
  HardyLayout layout = HardyLayout::hardy;
  NormalizationFit fit = NormalizationFit::max_entry;
  double epsilon = 0.0;
  double quantum_scale = 1.0;  // least-squares factor applied to the quantum family
  std::array<HardyEntry, 4> entries;

  int quantum_zero_count() const;
  int lhv_zero_count() const;
};

HardyReport hardy_report(const HardySettings& hs, const ModelParams& params,
                         NormalizationFit fit = NormalizationFit::max_entry,
                         HardyLayout layout = HardyLayout::hardy, double N = 1.0);

}  // namespace lhv
