#ifndef GKS_RNG_HPP
#define GKS_RNG_HPP

#include <cstdint>
#include <random>

#include "gks/stats.hpp"

namespace gks {

/// Deterministic random source. The core generator is std::mt19937_64, whose
/// sequence is fixed by the standard, so identical seeds yield identical
/// streams on every platform. Draw functions below never go through
/// std::*_distribution (those are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Independent child stream derived from the master seed (not the current
  /// state): child seed = splitmix64(seed + (index+1) * golden gamma).
  Rng child(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// iid N(mu, sigma^2) draws via the polar Box-Muller transform. Pairs are
/// generated per call; the spare from an odd count is discarded.
SampleSet normal_draws(Rng& rng, double mu, double sigma, std::size_t count);

/// iid exponential draws by inverse transform: exponential_quantile(rate, U).
SampleSet exponential_draws(Rng& rng, double rate, std::size_t count);

}  // namespace gks

#endif
