#pragma once

// Domain types and closed analytic formulas of the two-photon hidden-variable model.
//
// Conventions used throughout the library:
//  * A Setting (theta1, theta2) denotes polarizer 1 at theta1 and polarizer 2 at the
//    barred angle theta2 + pi/2. The quantum prediction and the model's response
//    vectors r1 = (sin theta1, 0, cos theta1), r2 = (sin theta2, 0, cos theta2)
//    are written in these coordinates.
//  * A polarizer 2 physically set to chi therefore uses response vector
//    analyzer_vector(chi - pi/2); see polarizer2_setting().

#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhv/vec3.hpp"

namespace lhv {

inline constexpr double kPi = std::numbers::pi;

/// Largest admissible cap parameter: the detection cap becomes a hemisphere.
inline constexpr double kMaxEpsilon = 2.0;
/// Above this cap size the small-cap expansion is no longer trustworthy.
inline constexpr double kSmallCapEpsilon = 0.2;

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reduces an angle to (-pi, pi].
double canonical_angle(double radians);

struct BeamSplitter {
  double r_sq = 0.0;  // |R|^2
  double t_sq = 0.0;  // |T|^2
};

class Setting {
 public:
  Setting() = default;
  Setting(double theta1, double theta2);

  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }
  /// Physical angle of polarizer 2.
  double bar_theta2() const { return theta2_ + kPi / 2.0; }

  bool operator==(const Setting&) const = default;

 private:
  double theta1_ = 0.0;
  double theta2_ = 0.0;
};

/// Setting for which polarizer 2 physically sits at `chi` (the unbarred angle).
Setting polarizer2_setting(double theta1, double chi);

class ModelParams {
 public:
  /// Throws InvalidParameter unless 0 < gamma <= 1, 0 < C <= 1, 0 < epsilon <= 2.
  static ModelParams make(double gamma, double C, double epsilon);

  double gamma() const { return gamma_; }
  double phi() const { return phi_; }
  double C() const { return C_; }
  double epsilon() const { return epsilon_; }

  ModelParams with_epsilon(double epsilon) const { return make(gamma_, C_, epsilon); }

  /// True when epsilon is past the regime where O(eps^3) corrections are small.
  bool outside_small_cap_regime() const { return epsilon_ > kSmallCapEpsilon; }

 private:
  ModelParams(double gamma, double C, double epsilon);

  double gamma_ = 1.0;
  double phi_ = 0.0;
  double C_ = 1.0;
  double epsilon_ = 0.01;
};

struct HiddenPair {
  Vec3 u1;
  Vec3 u2;

  bool is_normalized(double tol = 1e-12) const;
};

struct HardySettings {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta10 = 0.0;
  double theta20 = 0.0;

  HardySettings canonical() const;
};

enum class Method { monte_carlo, quadrature, closed_form, leading_order };

std::string to_string(Method m);

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::closed_form;
  // Monte Carlo only.
  std::uint64_t hits = 0;
  bool low_hit_count = false;
};

struct NormalizedModel {
  double gamma = 1.0;
  double phi = 0.0;
  bool swapped = false;
  std::vector<Setting> settings;
};

/// Maps a beam splitter onto gamma <= 1. When |R| > |T| the roles swap and every
/// angle theta_j is replaced by pi/2 - theta_j.
NormalizedModel normalize_params(const BeamSplitter& bs, std::span<const Setting> settings);

/// (sin theta, 0, cos theta)
Vec3 analyzer_vector(double theta);

/// Rotation by phi in the x-y plane.
Vec3 rotate_phi(const Vec3& v, double phi);

/// Hidden-variable density 3/(4 pi)^2 (u1 . R u2)^2 per d^2u1 d^2u2.
double density(const HiddenPair& pair, double phi);

/// C when |u - r(theta)|^2 <= epsilon (inclusive), 0 otherwise.
double response(const Vec3& u, double theta, double C, double epsilon);

/// N (cos t1 cos t2 + gamma sin t1 sin t2)^2, i.e. polarizer 2 at the barred angle.
double quantum_prediction(const Setting& setting, double gamma, double N = 1.0);

/// r1 . R r2 for the setting; equals cos t1 cos t2 + gamma sin t1 sin t2.
double analyzer_overlap(const Setting& setting, double phi);

/// (3/16) C^2 eps^2 (r1 . R r2)^2
double leading_order_p12(const Setting& setting, const ModelParams& params);

/// Polarizer-2 angle at which the quantum prediction vanishes for this theta1.
double zero_condition_angle(double theta1, double gamma);

}  // namespace lhv
