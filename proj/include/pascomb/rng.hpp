#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pascomb {

/// splitmix64; used to derive independent stream seeds from (master, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seeded stream with hand-rolled samplers. std::mt19937_64 has a pinned
/// output sequence across platforms; the samplers avoid std::*_distribution
/// whose sequences are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for replication `run_index` under `master_seed`. `salt`
  /// separates independent streams within one run (environment vs the
  /// S*-reference stream).
  static Rng stream(std::uint64_t master_seed, std::uint64_t run_index,
                    std::uint64_t salt = 0) {
    std::uint64_t s = splitmix64(master_seed ^ splitmix64(run_index + 1));
    return Rng(splitmix64(s ^ splitmix64(salt + 0x51ED2701)));
  }

  double uniform01() {  // in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal() {  // Box-Muller, two uniforms per call
    double u1 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// log of a Gamma(alpha, 1) draw (Marsaglia-Tsang; alpha < 1 via the
  /// boost G = Gamma(alpha+1) * U^(1/alpha), done in log space so tiny
  /// shapes do not underflow).
  double log_gamma_draw(double alpha) {
    double boost = 0.0;
    if (alpha < 1.0) {
      double u = uniform01();
      if (u < 1e-300) u = 1e-300;
      boost = std::log(u) / alpha;
      alpha += 1.0;
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform01();
      if (u < 1e-300) u = 1e-300;
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return std::log(d * v) + boost;
      }
    }
  }

  /// Beta(a, b) via the ratio of two gamma draws, formed in log space:
  /// X/(X+Y) = 1 / (1 + exp(logY - logX)).
  double beta(double a, double b) {
    const double lx = log_gamma_draw(a);
    const double ly = log_gamma_draw(b);
    return 1.0 / (1.0 + std::exp(ly - lx));
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pascomb
