// Seeded phase-space sampling from the two-mode squeezed Wigner function.
//
// Generator: every (seed, domain, trial) triple keys an independent
// SplitMix64 sequence. Uniforms take the top 53 bits of each output, offset
// by half a unit so they lie strictly inside (0, 1). Normals use the basic
// Box-Muller transform, returning the cosine branch first and the sine
// branch second. Samples therefore depend only on (seed, domain, trial) and
// never on the order or thread in which trials are generated.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cvsteer/moments.hpp"

namespace cvsteer {

struct PhasePoint {
  double x_a = 0.0;
  double p_a = 0.0;
  double x_b = 0.0;
  double p_b = 0.0;

  bool is_finite() const;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

// Independent families of substreams drawn from one user seed.
enum class StreamDomain : std::uint64_t {
  Tuple = 1,
  Basis = 2,
  CoherentNoise = 3,
};

struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  static SeededStream for_trial(std::uint64_t seed, StreamDomain domain, std::uint64_t trial);

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

class CounterRng {
 public:
  explicit CounterRng(SeededStream stream);

  std::uint64_t next_u64();
  double uniform();          // (0, 1)
  double standard_normal();  // N(0, 1)

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

PhasePoint sample_wigner(SqueezeParameter r, SeededStream stream);

// Adds independent N(0, 1/4) noise to x_a and p_a: the outcome of measuring
// the quadratures of the coherent state |x_a + i p_a>. Bob's side is untouched.
PhasePoint add_coherent_noise(const PhasePoint& p, SeededStream stream);

}  // namespace cvsteer
