#include "lhv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lhv/model.hpp"

namespace lhv {

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidParameter("Gauss-Legendre order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) {
        // one more derivative evaluation at the converged node
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        break;
      }
    }
    rule.nodes[i - 1] = mid - half * z;
    rule.nodes[n - i] = mid + half * z;
    rule.weights[i - 1] = 2.0 * half / ((1.0 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

void QuadratureSpec::validate() const {
  if (n_radial < 2) throw InvalidParameter("n_radial must be >= 2, got " + std::to_string(n_radial));
  if (n_azimuthal < 4)
    throw InvalidParameter("n_azimuthal must be >= 4, got " + std::to_string(n_azimuthal));
}

std::vector<WeightedPoint> cap_rule(const Cap& cap, const QuadratureSpec& spec) {
  spec.validate();
  const auto radial = gauss_legendre(spec.n_radial, cap.cos_alpha, 1.0);
  Vec3 e1;
  Vec3 e2;
  orthonormal_basis(cap.axis, e1, e2);
  const double dpsi = 2.0 * kPi / spec.n_azimuthal;

  std::vector<WeightedPoint> points;
  points.reserve(static_cast<std::size_t>(spec.n_radial) * spec.n_azimuthal);
  for (int i = 0; i < spec.n_radial; ++i) {
    const double c = radial.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int k = 0; k < spec.n_azimuthal; ++k) {
      const double psi = (k + 0.5) * dpsi;
      const Vec3 u = c * cap.axis + s * (std::cos(psi) * e1 + std::sin(psi) * e2);
      points.push_back({u, radial.weights[i] * dpsi});
    }
  }
  return points;
}

}  // namespace lhv
