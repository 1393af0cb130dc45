// Moment estimation from trial data and batch-based sampling errors.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvsteer/protocol.hpp"
#include "cvsteer/witness.hpp"

namespace cvsteer {

struct SectorEstimate {
  MomentSummary summary;
  double se_n = 0.0;
  double se_m = 0.0;
  double se_c = 0.0;
  std::size_t trials = 0;
};

struct MomentEstimate {
  SectorEstimate x;
  SectorEstimate p;
  std::size_t batch_count = 0;
  std::uint64_t alice_dataset = 0;

  QuadratureMoments moments() const { return {x.summary, p.summary}; }
};

// Unbiased (N-1) sample moments per basis; the P sector stores
// c = -Cov(alice, partner). Standard errors are plug-in estimates from the
// spread of the centred products. batch_count is the number of complete
// X/P batch pairs at `batch_size`. Throws ConfigError with fewer than two
// trials in either basis.
MomentEstimate estimate_moments(std::span<const JointSample> samples, std::uint32_t batch_size = 10);
MomentEstimate estimate_moments(std::span<const TrialRecord> records, std::uint32_t batch_size = 10);

// Identity of Alice's reported data (trial index, basis, value) for
// matching reports in a monogamy product.
std::uint64_t alice_fingerprint(std::span<const JointSample> samples);

enum class TrimPolicy {
  Reject,    // per-basis counts must divide evenly into batches
  Truncate,  // drop each basis' trailing partial batch
};

struct BatchedWitness {
  WitnessKind kind = WitnessKind::EntProduct;
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> batch_values;
  std::uint32_t batch_size = 0;
  std::size_t trimmed_trials = 0;
  // Batches of the more frequent basis that had no partner and were dropped.
  std::size_t unpaired_batches = 0;
};

// Splits each basis, in trial order, into consecutive batches, pairs the k-th
// X batch with the k-th P batch and evaluates the witness (gains re-optimised)
// on every pair. std_error = sd(batch values) / sqrt(batches).
BatchedWitness batched_witness(std::span<const JointSample> samples, WitnessKind kind,
                               std::uint32_t batch_size = 10, TrimPolicy trim = TrimPolicy::Reject);

// Pooled full-sample witness together with its batch-scatter error. The
// pooled value is the point estimate; the batch mean carries a small-batch
// bias that does not shrink with the trial count.
struct WitnessEstimate {
  WitnessReport pooled;
  BatchedWitness batches;

  double estimate() const { return pooled.value; }
  double std_error() const { return batches.std_error; }
};

WitnessEstimate estimate_witness(std::span<const JointSample> samples, WitnessKind kind,
                                 std::uint32_t batch_size = 10, TrimPolicy trim = TrimPolicy::Reject);

}  // namespace cvsteer
