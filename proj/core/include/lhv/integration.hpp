#pragma once

// Three independent evaluators of the joint detection probability
//   P12 = integral of P1(theta1, u1) P2(theta2, u2) rho(u1, u2) d^2u1 d^2u2
// plus the single-arm marginal and the density normalization check.

#include <cstdint>
#include <random>

#include "lhv/model.hpp"
#include "lhv/quadrature.hpp"

namespace lhv {

struct McSpec {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  std::uint64_t n_chunks = 16;

  /// Throws InvalidParameter unless n_samples >= 1 and 1 <= n_chunks <= n_samples.
  void validate() const;
};

/// Estimates with fewer coincidences than this carry the low-hit flag.
inline constexpr std::uint64_t kLowHitThreshold = 10;

/// Deterministic uniform stream. Doubles are built from the top 53 bits of
/// mt19937_64 output, so sequences are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Seed of the chunk-th sub-stream derived from the master seed (splitmix64 sequence).
std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t chunk);

/// Second moments of the uniform measure on a detection cap of size epsilon:
/// integral over the cap of u u^T = q I + (p - q) r r^T.
struct CapMoments {
  double p = 0.0;  // along the cap axis
  double q = 0.0;  // along each transverse direction

  static CapMoments of(double epsilon);
};

/// Exact draw from the hidden-variable density: u2 uniform, then u1 with polar
/// density (3/2) c^2 about R u2 (inverse CDF c = cbrt(2U - 1)).
HiddenPair sample_hidden_pair(RandomStream& rng, double phi);

ProbabilityEstimate estimate_p12_mc(const Setting& setting, const ModelParams& params,
                                    const McSpec& mc);

/// Cap-local product quadrature of C^2 rho over cap1 x cap2.
ProbabilityEstimate compute_p12_quadrature(const Setting& setting, const ModelParams& params,
                                           const QuadratureSpec& quad);

/// C^2 3/(4pi)^2 [3q^2 + 2q(p-q) + (p-q)^2 (r1 . R r2)^2]
ProbabilityEstimate compute_p12_closed_form(const Setting& setting, const ModelParams& params);

/// Single-arm detection probability; analytically C eps / 4 for every theta1.
ProbabilityEstimate marginal_p1(double theta1, const ModelParams& params,
                                const QuadratureSpec& quad);

/// Exact single-arm marginal C eps / 4.
double marginal_exact(const ModelParams& params);

/// Double-sphere quadrature of the density; equals 1.
double density_norm_check(double phi, const QuadratureSpec& quad);

}  // namespace lhv
