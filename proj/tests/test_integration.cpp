#include <cmath>
#include <vector>

#include "doctest.h"
#include "lhv/integration.hpp"
#include "oracles.hpp"
#include "property.hpp"

using namespace lhv;
using doctest::Approx;

namespace {

// Double-cap brute-force integration (Gauss-Legendre in the polar angle,
// independent implementation) frozen from an offline run.
struct Frozen {
  double t1, t2, gamma, eps, value;
};
const Frozen kFrozen[] = {
    {0.0, 0.0, 0.5, 0.1, 0.0016974238281250017},
    {kPi / 6, kPi / 3, 0.5, 0.2, 0.002985446289062498},
    {0.0, 0.0, 0.5, 0.01, 1.8563513283203157e-05},
    {kPi / 4, -1.1071487177940904, 0.5, 0.01, 9.324335839843805e-08},
    {kPi / 6, kPi / 3, 0.5, 1e-3, 7.907667364188962e-08},
    {kPi / 6, kPi / 5, 0.5, 0.1, 0.0012444068564532687},
    {kPi / 6, 2 * kPi / 5, 0.5, 0.1, 0.0004996491750882271},
    {kPi / 3, kPi / 5, 0.5, 0.1, 0.0007874452228884578},
    {kPi / 3, 2 * kPi / 5, 0.5, 0.1, 0.0006047217400495224},
};

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  const auto r = gauss_legendre(5, -1.0, 1.0);
  double sum = 0.0;
  for (double w : r.weights) sum += w;
  CHECK(sum == Approx(2.0).epsilon(1e-14));
  // exact for degree 9
  double m8 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) m8 += r.weights[i] * std::pow(r.nodes[i], 8);
  CHECK(m8 == Approx(2.0 / 9.0).epsilon(1e-14));
  const auto s = gauss_legendre(3, 0.5, 1.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) m2 += s.weights[i] * s.nodes[i] * s.nodes[i];
  CHECK(m2 == Approx((1.0 - 0.125) / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0, 0, 1), InvalidParameter);
}

TEST_CASE("QuadratureSpec and McSpec validation") {
  CHECK_THROWS_AS((QuadratureSpec{1, 8}.validate()), InvalidParameter);
  CHECK_THROWS_AS((QuadratureSpec{2, 3}.validate()), InvalidParameter);
  CHECK_NOTHROW((QuadratureSpec{2, 4}.validate()));
  CHECK_THROWS_AS((McSpec{0, 1, 1}.validate()), InvalidParameter);
  CHECK_THROWS_AS((McSpec{10, 1, 0}.validate()), InvalidParameter);
  CHECK_THROWS_AS((McSpec{10, 1, 11}.validate()), InvalidParameter);
  CHECK_NOTHROW((McSpec{10, 1, 10}.validate()));
}

TEST_CASE("cap rule weights sum to the cap area") {
  for (double eps : {1e-3, 0.05, 0.2, 2.0}) {
    double area = 0.0;
    for (const auto& p : cap_rule(Cap::detection(analyzer_vector(0.9), eps), {3, 6})) {
      area += p.weight;
      CHECK(response(p.u, 0.9, 1.0, eps) == 1.0);
    }
    CHECK(area == Approx(kPi * eps).epsilon(1e-13));
  }
  double sphere = 0.0;
  for (const auto& p : cap_rule(Cap::sphere(), {4, 8})) sphere += p.weight;
  CHECK(sphere == Approx(4.0 * kPi).epsilon(1e-14));
}

TEST_CASE("CapMoments") {
  const auto m = CapMoments::of(0.1);
  const double c = 1.0 - 0.05;
  CHECK(m.p == Approx(2.0 * kPi * (1.0 - c * c * c) / 3.0).epsilon(1e-12));
  CHECK(m.q == Approx(kPi * (2.0 - 3.0 * c + c * c * c) / 3.0).epsilon(1e-10));
  for (int i = 1; i <= 200; ++i) {
    const double eps = 2.0 * i / 200.0;
    const auto mm = CapMoments::of(eps);
    CHECK(std::abs(mm.p + 2.0 * mm.q - kPi * eps) <= 1e-12);
    if (eps < 2.0) CHECK(mm.p > mm.q);
    CHECK(mm.q >= 0.0);
  }
  // second moments of the cap checked against the library quadrature
  const double eps = 0.3;
  const Vec3 r = analyzer_vector(0.4);
  double along = 0.0, across = 0.0;
  for (const auto& p : cap_rule(Cap::detection(r, eps), {4, 8})) {
    along += p.weight * dot(p.u, r) * dot(p.u, r);
    across += p.weight * p.u.y * p.u.y;
  }
  CHECK(along == Approx(CapMoments::of(eps).p).epsilon(1e-13));
  CHECK(across == Approx(CapMoments::of(eps).q).epsilon(1e-12));
}

TEST_CASE("closed form matches the independent brute-force integrals") {
  for (const auto& f : kFrozen) {
    const auto p = ModelParams::make(f.gamma, 1.0, f.eps);
    const double cf = compute_p12_closed_form(Setting(f.t1, f.t2), p).value;
    CHECK(cf == Approx(f.value).epsilon(1e-12));
  }
  // live Simpson oracle on a few generic points, including C < 1
  prop::for_all(4, 77, [](prop::Gen& g) {
    const double t1 = g.angle(), t2 = g.angle(), gamma = g.uniform(0.1, 1.0), eps = g.uniform(0.02, 0.3);
    const auto p = ModelParams::make(gamma, 0.8, eps);
    const double ref = oracle::p12(t1, t2, gamma, 0.8, eps);
    CHECK(compute_p12_closed_form(Setting(t1, t2), p).value == Approx(ref).epsilon(1e-9));
  });
}

TEST_CASE("quadrature equals closed form") {
  const auto p = ModelParams::make(0.5, 1.0, 0.1);
  const Setting s(0.0, 0.0);
  CHECK(std::abs(compute_p12_quadrature(s, p, {}).value - compute_p12_closed_form(s, p).value) < 1e-12);

  for (double eps : {0.05, 0.1, 0.2}) {
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) {
        const Setting st(-1.4 + 0.45 * i, -1.3 + 0.43 * j);
        const auto pp = ModelParams::make(0.3, 0.9, eps);
        CHECK(std::abs(compute_p12_quadrature(st, pp, {2, 5}).value -
                       compute_p12_closed_form(st, pp).value) < 1e-10);
      }
    }
  }
}

TEST_CASE("quadrature is exact once the rule resolves the polynomial") {
  const auto p = ModelParams::make(0.5, 1.0, 0.15);
  const Setting s(0.3, -0.8);
  const double a = compute_p12_quadrature(s, p, {3, 6}).value;
  const double b = compute_p12_quadrature(s, p, {3, 12}).value;
  const double c = compute_p12_quadrature(s, p, {6, 12}).value;
  CHECK(std::abs(a - b) < 1e-13);
  CHECK(std::abs(a - c) < 1e-13);
  CHECK(compute_p12_quadrature(s, p, {}).method == Method::quadrature);
}

TEST_CASE("closed form approaches the leading order") {
  const Setting s(kPi / 6, kPi / 3);
  const auto p = ModelParams::make(0.5, 1.0, 1e-3);
  const double gap = compute_p12_closed_form(s, p).value / leading_order_p12(s, p) - 1.0;
  CHECK(std::abs(gap) <= 5e-3);

  const auto q = ModelParams::make(0.5, 1.0, 0.01);
  CHECK(compute_p12_closed_form(Setting(0, 0), q).value == Approx(1.875e-5).epsilon(0.02));

  // zero manifold: O(eps^3) floor with coefficient ~ eps/2 relative to (3/16) eps^2
  const Setting z(kPi / 4, zero_condition_angle(kPi / 4, 0.5));
  const double ratio = compute_p12_closed_form(z, q).value / (3.0 / 16.0 * 1e-4);
  CHECK(ratio == Approx(0.005).epsilon(0.02));
}

TEST_CASE("quadrature shrinks like eps^3 on the zero manifold") {
  const Setting z(kPi / 4, zero_condition_angle(kPi / 4, 0.5));
  double prev = 0.0;
  for (double eps : {0.04, 0.02, 0.01, 0.005}) {
    const double v = compute_p12_quadrature(z, ModelParams::make(0.5, 1.0, eps), {}).value;
    if (prev > 0.0) CHECK(prev / v == Approx(8.0).epsilon(0.05));
    prev = v;
  }
}

TEST_CASE("marginal_p1 is C eps / 4 independent of theta1") {
  const auto p = ModelParams::make(0.5, 1.0, 0.01);
  CHECK(marginal_p1(0.3, p, {}).value == Approx(0.0025).epsilon(1e-10));
  CHECK(std::abs(marginal_p1(0.0, p, {}).value - marginal_p1(1.234, p, {}).value) < 1e-12);
  CHECK(marginal_p1(0.0, ModelParams::make(0.5, 0.5, 0.01), {}).value == Approx(0.00125).epsilon(1e-10));
  CHECK(marginal_exact(p) == 0.0025);
}

TEST_CASE("density normalizes to one") {
  for (double phi : {0.0, kPi / 3, std::acos(0.25)}) CHECK(std::abs(density_norm_check(phi, {}) - 1.0) < 1e-10);
}

TEST_CASE("chunk seeds are distinct and deterministic") {
  CHECK(chunk_seed(1, 0) == chunk_seed(1, 0));
  CHECK(chunk_seed(1, 0) != chunk_seed(1, 1));
  CHECK(chunk_seed(1, 3) != chunk_seed(2, 3));
}

TEST_CASE("sampler") {
  RandomStream a(42), b(42);
  const auto pa = sample_hidden_pair(a, 0.7);
  const auto pb = sample_hidden_pair(b, 0.7);
  CHECK(pa.u1 == pb.u1);
  CHECK(pa.u2 == pb.u2);

  RandomStream rng(2024);
  const double phi = std::acos(0.5);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, z = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_hidden_pair(rng, phi);
    CHECK(p.is_normalized());
    const double d = dot(p.u1, rotate_phi(p.u2, phi));
    s += d * d;
    s2 += d * d * d * d;
    z += p.u2.z;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 0.6) < 4.0 * se);
  CHECK(std::abs(z / n) < 4.0 * std::sqrt(1.0 / 3.0 / n));
}

TEST_CASE("Monte Carlo estimator") {
  const auto p = ModelParams::make(0.5, 1.0, 0.2);
  const Setting s(0.0, 0.0);
  const McSpec mc{400000, 99, 8};
  const auto a = estimate_p12_mc(s, p, mc);
  const auto b = estimate_p12_mc(s, p, mc);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.method == Method::monte_carlo);
  CHECK(a.hits > 0);
  CHECK_FALSE(a.low_hit_count);
  const double cf = compute_p12_closed_form(s, p).value;
  CHECK(std::abs(a.value - cf) < 4.0 * a.std_error);

  // different chunking, same total: still an unbiased estimate of the same value
  const auto c = estimate_p12_mc(s, p, {400000, 99, 3});
  CHECK(std::abs(c.value - cf) < 4.0 * c.std_error);

  SUBCASE("hemisphere caps stay bounded") {
    const auto h = estimate_p12_mc(Setting(0, 0), ModelParams::make(0.5, 0.9, 2.0), {20000, 5, 4});
    CHECK(h.value > 0.0);
    CHECK(h.value <= 0.81);
  }
  SUBCASE("too few samples flags low hits") {
    const auto tiny = estimate_p12_mc(s, ModelParams::make(0.5, 1.0, 1e-4), {50, 1, 1});
    CHECK(tiny.value == 0.0);
    CHECK(tiny.std_error == 0.0);
    CHECK(tiny.low_hit_count);
  }
}
