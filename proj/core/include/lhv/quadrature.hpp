#pragma once

#include <vector>

#include "lhv/vec3.hpp"

namespace lhv {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b]. Requires n >= 1.
GaussLegendre gauss_legendre(int n, double a, double b);

struct QuadratureSpec {
  int n_radial = 4;
  int n_azimuthal = 8;

  /// Throws InvalidParameter unless n_radial >= 2 and n_azimuthal >= 4.
  void validate() const;
};

/// Spherical cap {u : u . axis >= cos_alpha}. cos_alpha = -1 is the whole sphere.
struct Cap {
  Vec3 axis{0.0, 0.0, 1.0};
  double cos_alpha = 1.0;

  /// Detection cap |u - axis|^2 <= epsilon, i.e. cos_alpha = 1 - epsilon/2.
  static Cap detection(const Vec3& axis, double epsilon) { return {axis, 1.0 - 0.5 * epsilon}; }
  static Cap sphere() { return {{0.0, 0.0, 1.0}, -1.0}; }
};

struct WeightedPoint {
  Vec3 u;
  double weight = 0.0;
};

/// Product rule over a cap: Gauss-Legendre in cos(polar angle about the axis),
/// uniform nodes in azimuth. Exact for integrands that are polynomials of degree
/// <= 2 n_radial - 1 in the cap coordinates with trigonometric degree < n_azimuthal.
std::vector<WeightedPoint> cap_rule(const Cap& cap, const QuadratureSpec& spec);

}  // namespace lhv
