#include "lhv/model.hpp"

#include <cmath>

namespace lhv {

double canonical_angle(double radians) {
  if (!std::isfinite(radians)) throw InvalidParameter("angle must be finite");
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Setting::Setting(double theta1, double theta2)
    : theta1_(canonical_angle(theta1)), theta2_(canonical_angle(theta2)) {}

Setting polarizer2_setting(double theta1, double chi) { return Setting(theta1, chi - kPi / 2.0); }

ModelParams::ModelParams(double gamma, double C, double epsilon)
    : gamma_(gamma), phi_(std::acos(gamma)), C_(C), epsilon_(epsilon) {}

ModelParams ModelParams::make(double gamma, double C, double epsilon) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidParameter("gamma must lie in (0, 1], got " + std::to_string(gamma));
  if (!(C > 0.0 && C <= 1.0))
    throw InvalidParameter("C must lie in (0, 1], got " + std::to_string(C));
  if (!(epsilon > 0.0 && epsilon <= kMaxEpsilon))
    throw InvalidParameter("epsilon must lie in (0, 2], got " + std::to_string(epsilon));
  return ModelParams(gamma, C, epsilon);
}

bool HiddenPair::is_normalized(double tol) const {
  return std::abs(norm(u1) - 1.0) <= tol && std::abs(norm(u2) - 1.0) <= tol;
}

HardySettings HardySettings::canonical() const {
  return {canonical_angle(theta1), canonical_angle(theta2), canonical_angle(theta10),
          canonical_angle(theta20)};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::monte_carlo:
      return "monte-carlo";
    case Method::quadrature:
      return "quadrature";
    case Method::closed_form:
      return "closed-form";
    case Method::leading_order:
      return "leading-order";
  }
  return "unknown";
}

NormalizedModel normalize_params(const BeamSplitter& bs, std::span<const Setting> settings) {
  if (!(bs.r_sq >= 0.0) || !(bs.t_sq >= 0.0) || !std::isfinite(bs.r_sq) || !std::isfinite(bs.t_sq))
    throw InvalidParameter("beam splitter coefficients must be finite and non-negative");
  if (bs.r_sq == 0.0 && bs.t_sq == 0.0)
    throw InvalidParameter("invalid beam splitter: |R|^2 and |T|^2 are both zero");

  NormalizedModel out;
  out.settings.assign(settings.begin(), settings.end());
  if (bs.r_sq == bs.t_sq) {
    out.gamma = 1.0;
  } else if (bs.r_sq < bs.t_sq) {
    out.gamma = bs.r_sq / bs.t_sq;
  } else {
    out.gamma = bs.t_sq / bs.r_sq;
    out.swapped = true;
    for (auto& s : out.settings) s = Setting(kPi / 2.0 - s.theta1(), kPi / 2.0 - s.theta2());
  }
  if (out.gamma == 0.0)
    throw InvalidParameter("invalid beam splitter: one coefficient is zero, gamma would be 0");
  out.phi = std::acos(out.gamma);
  return out;
}

Vec3 analyzer_vector(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

Vec3 rotate_phi(const Vec3& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

double density(const HiddenPair& pair, double phi) {
  const double overlap = dot(pair.u1, rotate_phi(pair.u2, phi));
  return 3.0 / ((4.0 * kPi) * (4.0 * kPi)) * overlap * overlap;
}

double response(const Vec3& u, double theta, double C, double epsilon) {
  return norm_sq(u - analyzer_vector(theta)) <= epsilon ? C : 0.0;
}

double quantum_prediction(const Setting& setting, double gamma, double N) {
  const double amp = std::cos(setting.theta1()) * std::cos(setting.theta2()) +
                     gamma * std::sin(setting.theta1()) * std::sin(setting.theta2());
  return N * amp * amp;
}

double analyzer_overlap(const Setting& setting, double phi) {
  return dot(analyzer_vector(setting.theta1()), rotate_phi(analyzer_vector(setting.theta2()), phi));
}

double leading_order_p12(const Setting& setting, const ModelParams& params) {
  const double d = analyzer_overlap(setting, params.phi());
  const double eps = params.epsilon();
  return 3.0 / 16.0 * params.C() * params.C() * eps * eps * d * d;
}

double zero_condition_angle(double theta1, double gamma) {
  if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
  const double t = canonical_angle(theta1);
  // Exact branches at multiples of pi/2.
  if (t == 0.0 || t == kPi) return kPi / 2.0;
  if (t == kPi / 2.0 || t == -kPi / 2.0) return 0.0;
  // cos t1 cos t2 + gamma sin t1 sin t2 = 0  <=>  tan t2 = -cos t1 / (gamma sin t1)
  double t2 = std::atan2(-std::cos(t), gamma * std::sin(t));
  if (t2 <= -kPi / 2.0) t2 += kPi;
  if (t2 > kPi / 2.0) t2 -= kPi;
  return t2;
}

}  // namespace lhv
