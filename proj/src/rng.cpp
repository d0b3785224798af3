#include "demonsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace demonsim {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& path) {
  std::uint64_t s = master ^ fnv1a64(path);
  return splitmix64(s);
}

RngStream RngStream::derived(std::uint64_t master, const std::string& path) {
  return RngStream(derive_seed(master, path));
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

long long RngStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw std::invalid_argument("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;

  if (mean < 10.0) {
    // Knuth multiplication method.
    const double limit = std::exp(-mean);
    long long k = 0;
    double prod = next_double();
    while (prod > limit) {
      ++k;
      prod *= next_double();
    }
    return k;
  }

  // PTRS transformed rejection (Hoermann 1993).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = next_double() - 0.5;
    const double v = next_double();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kd;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - std::lgamma(k + 1.0))
      return static_cast<long long>(kd);
  }
}

}  // namespace demonsim
