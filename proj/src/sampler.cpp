#include "cvsteer/sampler.hpp"

#include <cmath>
#include <numbers>

#include "cvsteer/errors.hpp"

namespace cvsteer {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

bool PhasePoint::is_finite() const {
  return std::isfinite(x_a) && std::isfinite(p_a) && std::isfinite(x_b) && std::isfinite(p_b);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SeededStream SeededStream::for_trial(std::uint64_t seed, StreamDomain domain, std::uint64_t trial) {
  return {splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(domain))), trial};
}

CounterRng::CounterRng(SeededStream stream)
    : state_(splitmix64(stream.seed ^ splitmix64(stream.index * kGamma + 1))) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGamma;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::standard_normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  return radius * std::cos(kTwoPi * u2);
}

PhasePoint sample_wigner(SqueezeParameter r, SeededStream stream) {
  CounterRng rng(stream);
  // The Wigner function factorises in the sum/difference variables:
  // x_A - x_B and p_A + p_B have variance exp(-2r)/2,
  // x_A + x_B and p_A - p_B have variance exp(2r)/2.
  const double narrow = std::sqrt(r.sigma_minus_sq() / 2.0);
  const double wide = std::sqrt(r.sigma_plus_sq() / 2.0);
  const double x_diff = narrow * rng.standard_normal();
  const double p_sum = narrow * rng.standard_normal();
  const double x_sum = wide * rng.standard_normal();
  const double p_diff = wide * rng.standard_normal();
  PhasePoint out{(x_sum + x_diff) / 2.0, (p_sum + p_diff) / 2.0, (x_sum - x_diff) / 2.0,
                 (p_sum - p_diff) / 2.0};
  if (!out.is_finite()) throw ConsistencyError("non-finite Wigner sample");
  return out;
}

PhasePoint add_coherent_noise(const PhasePoint& p, SeededStream stream) {
  CounterRng rng(stream);
  PhasePoint out = p;
  out.x_a += 0.5 * rng.standard_normal();
  out.p_a += 0.5 * rng.standard_normal();
  return out;
}

}  // namespace cvsteer
