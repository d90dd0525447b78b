#include "lhv/integration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

namespace lhv {

namespace {

constexpr double kDensityPrefactor = 3.0 / ((4.0 * kPi) * (4.0 * kPi));

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ChunkPartial {
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

ChunkPartial run_chunk(std::uint64_t seed, std::uint64_t n, const Vec3& r1, const Vec3& r2,
                       const ModelParams& params) {
  RandomStream rng(seed);
  ChunkPartial part;
  part.n = n;
  const double eps = params.epsilon();
  const double C = params.C();
  for (std::uint64_t i = 0; i < n; ++i) {
    const HiddenPair pair = sample_hidden_pair(rng, params.phi());
    const double p1 = norm_sq(pair.u1 - r1) <= eps ? C : 0.0;
    if (p1 == 0.0) continue;
    const double p2 = norm_sq(pair.u2 - r2) <= eps ? C : 0.0;
    const double x = p1 * p2;
    if (x != 0.0) ++part.hits;
    part.sum += x;
    part.sum_sq += x * x;
  }
  return part;
}

double integrate_pair(const std::vector<WeightedPoint>& cap1, const std::vector<WeightedPoint>& cap2,
                      double phi) {
  // Rotating the second cap's nodes once keeps the inner loop to a dot product.
  std::vector<WeightedPoint> rotated(cap2);
  for (auto& p : rotated) p.u = rotate_phi(p.u, phi);
  double total = 0.0;
  for (const auto& a : cap1) {
    double inner = 0.0;
    for (const auto& b : rotated) {
      const double overlap = dot(a.u, b.u);
      inner += b.weight * overlap * overlap;
    }
    total += a.weight * inner;
  }
  return kDensityPrefactor * total;
}

}  // namespace

void McSpec::validate() const {
  if (n_samples < 1) throw InvalidParameter("n_samples must be >= 1");
  if (n_chunks < 1) throw InvalidParameter("n_chunks must be >= 1");
  if (n_chunks > n_samples)
    throw InvalidParameter("n_chunks (" + std::to_string(n_chunks) + ") exceeds n_samples (" +
                           std::to_string(n_samples) + ")");
}

std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t chunk) {
  std::uint64_t state = master;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= chunk; ++i) out = splitmix64(state);
  return out;
}

CapMoments CapMoments::of(double epsilon) {
  // With c = cos(alpha) = 1 - eps/2 the textbook forms 2pi(1 - c^3)/3 and
  // pi(2 - 3c + c^3)/3 cancel catastrophically for small eps; factor out (1 - c).
  const double c = 1.0 - 0.5 * epsilon;
  const double x = 0.5 * epsilon;
  CapMoments m;
  m.p = 2.0 * kPi * x * (1.0 + c + c * c) / 3.0;
  m.q = kPi * x * x * (2.0 + c) / 3.0;
  return m;
}

HiddenPair sample_hidden_pair(RandomStream& rng, double phi) {
  HiddenPair pair;
  const double z = 2.0 * rng.uniform() - 1.0;
  const double az = 2.0 * kPi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  pair.u2 = {s * std::cos(az), s * std::sin(az), z};

  const Vec3 pole = rotate_phi(pair.u2, phi);
  const double c = std::cbrt(2.0 * rng.uniform() - 1.0);
  const double psi = 2.0 * kPi * rng.uniform();
  const double sc = std::sqrt(std::max(0.0, 1.0 - c * c));
  Vec3 e1;
  Vec3 e2;
  orthonormal_basis(pole, e1, e2);
  pair.u1 = c * pole + sc * (std::cos(psi) * e1 + std::sin(psi) * e2);
  return pair;
}

ProbabilityEstimate estimate_p12_mc(const Setting& setting, const ModelParams& params,
                                    const McSpec& mc) {
  mc.validate();
  const Vec3 r1 = analyzer_vector(setting.theta1());
  const Vec3 r2 = analyzer_vector(setting.theta2());

  const std::uint64_t n_chunks = mc.n_chunks;
  std::vector<ChunkPartial> partials(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < n_chunks; k = next++) {
      const std::uint64_t n = mc.n_samples / n_chunks + (k < mc.n_samples % n_chunks ? 1 : 0);
      partials[k] = run_chunk(chunk_seed(mc.seed, k), n, r1, r2, params);
    }
  };
  const auto n_threads = static_cast<std::uint64_t>(
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, n_chunks));
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  ChunkPartial total;
  for (const auto& p : partials) {
    total.n += p.n;
    total.hits += p.hits;
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(total.n);
  ProbabilityEstimate est;
  est.method = Method::monte_carlo;
  est.value = total.sum / n;
  if (total.n > 1) {
    const double var = std::max(0.0, (total.sum_sq - total.sum * est.value) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  est.hits = total.hits;
  est.low_hit_count = total.hits < kLowHitThreshold;
  return est;
}

ProbabilityEstimate compute_p12_quadrature(const Setting& setting, const ModelParams& params,
                                           const QuadratureSpec& quad) {
  const auto cap1 = cap_rule(Cap::detection(analyzer_vector(setting.theta1()), params.epsilon()), quad);
  const auto cap2 = cap_rule(Cap::detection(analyzer_vector(setting.theta2()), params.epsilon()), quad);
  ProbabilityEstimate est;
  est.method = Method::quadrature;
  est.value = params.C() * params.C() * integrate_pair(cap1, cap2, params.phi());
  return est;
}

ProbabilityEstimate compute_p12_closed_form(const Setting& setting, const ModelParams& params) {
  const CapMoments m = CapMoments::of(params.epsilon());
  const double a = m.p - m.q;
  const double d = analyzer_overlap(setting, params.phi());
  ProbabilityEstimate est;
  est.method = Method::closed_form;
  est.value = params.C() * params.C() * kDensityPrefactor *
              (3.0 * m.q * m.q + 2.0 * m.q * a + a * a * d * d);
  return est;
}

ProbabilityEstimate marginal_p1(double theta1, const ModelParams& params,
                                const QuadratureSpec& quad) {
  const auto cap1 = cap_rule(Cap::detection(analyzer_vector(theta1), params.epsilon()), quad);
  const auto sphere = cap_rule(Cap::sphere(), quad);
  ProbabilityEstimate est;
  est.method = Method::quadrature;
  est.value = params.C() * integrate_pair(cap1, sphere, params.phi());
  return est;
}

double marginal_exact(const ModelParams& params) { return params.C() * params.epsilon() / 4.0; }

double density_norm_check(double phi, const QuadratureSpec& quad) {
  const auto sphere = cap_rule(Cap::sphere(), quad);
  return integrate_pair(sphere, sphere, phi);
}

}  // namespace lhv
