#include "gks/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gks {

namespace {

// splitmix64 finalizer (Steele, Lea & Flood 2014).
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::child(std::uint64_t index) const {
  return Rng(splitmix64(seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL));
}

SampleSet normal_draws(Rng& rng, double mu, double sigma, std::size_t count) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("normal_draws: sigma must be positive");
  if (count < 1)
    throw std::invalid_argument("normal_draws: count must be >= 1");

  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    double u, v, s;
    do {
      u = 2.0 * rng.next_double() - 1.0;
      v = 2.0 * rng.next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    out.push_back(mu + sigma * (u * f));
    if (out.size() < count) out.push_back(mu + sigma * (v * f));
  }
  return SampleSet(std::move(out));
}

SampleSet exponential_draws(Rng& rng, double rate, std::size_t count) {
  if (!(rate > 0.0))
    throw std::invalid_argument("exponential_draws: rate must be positive");
  if (count < 1)
    throw std::invalid_argument("exponential_draws: count must be >= 1");
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(exponential_quantile(rate, rng.next_double()));
  return SampleSet(std::move(out));
}

}  // namespace gks
