#include "cvsteer/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cvsteer/errors.hpp"

namespace cvsteer {

namespace {

struct Split {
  std::vector<JointSample> x;
  std::vector<JointSample> p;
};

Split split_by_basis(std::span<const JointSample> samples) {
  Split out;
  for (const auto& s : samples) (s.basis == Basis::X ? out.x : out.p).push_back(s);
  auto by_index = [](const JointSample& a, const JointSample& b) { return a.index < b.index; };
  std::stable_sort(out.x.begin(), out.x.end(), by_index);
  std::stable_sort(out.p.begin(), out.p.end(), by_index);
  return out;
}

SectorEstimate sector_estimate(std::span<const JointSample> s, Basis basis) {
  const std::size_t k = s.size();
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const auto& v : s) {
    mean_a += v.alice;
    mean_b += v.partner;
  }
  mean_a /= static_cast<double>(k);
  mean_b /= static_cast<double>(k);

  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (const auto& v : s) {
    const double da = v.alice - mean_a;
    const double db = v.partner - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  const double denom = static_cast<double>(k - 1);
  SectorEstimate out;
  out.trials = k;
  out.summary.n = saa / denom;
  out.summary.m = sbb / denom;
  out.summary.c = (basis == Basis::X ? sab : -sab) / denom;

  // Plug-in errors: spread of the centred products around their means.
  const double kd = static_cast<double>(k);
  const double ma = saa / kd, mb = sbb / kd, mab = sab / kd;
  double vaa = 0.0, vbb = 0.0, vab = 0.0;
  for (const auto& v : s) {
    const double da = v.alice - mean_a;
    const double db = v.partner - mean_b;
    vaa += (da * da - ma) * (da * da - ma);
    vbb += (db * db - mb) * (db * db - mb);
    vab += (da * db - mab) * (da * db - mab);
  }
  out.se_n = std::sqrt(vaa / denom / kd);
  out.se_m = std::sqrt(vbb / denom / kd);
  out.se_c = std::sqrt(vab / denom / kd);
  return out;
}

QuadratureMoments batch_moments(std::span<const JointSample> x, std::span<const JointSample> p) {
  return {sector_estimate(x, Basis::X).summary, sector_estimate(p, Basis::P).summary};
}

}  // namespace

MomentEstimate estimate_moments(std::span<const JointSample> samples, std::uint32_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  const Split split = split_by_basis(samples);
  if (split.x.size() < 2 || split.p.size() < 2) {
    throw ConfigError("need at least two trials in each basis, got " + std::to_string(split.x.size()) +
                      " X and " + std::to_string(split.p.size()) + " P");
  }
  MomentEstimate out;
  out.x = sector_estimate(split.x, Basis::X);
  out.p = sector_estimate(split.p, Basis::P);
  out.batch_count = std::min(split.x.size(), split.p.size()) / batch_size;
  out.alice_dataset = alice_fingerprint(samples);
  return out;
}

MomentEstimate estimate_moments(std::span<const TrialRecord> records, std::uint32_t batch_size) {
  const auto samples = alice_bob_samples(records);
  return estimate_moments(std::span<const JointSample>(samples), batch_size);
}

std::uint64_t alice_fingerprint(std::span<const JointSample> samples) {
  // FNV-1a over (index, basis, value bits).
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xFFU;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto& s : samples) {
    mix(s.index);
    mix(s.basis == Basis::X ? 0 : 1);
    mix(std::bit_cast<std::uint64_t>(s.alice));
  }
  return h;
}

BatchedWitness batched_witness(std::span<const JointSample> samples, WitnessKind kind,
                               std::uint32_t batch_size, TrimPolicy trim) {
  if (batch_size < 2) throw ConfigError("batch size must be at least 2");
  if (kind == WitnessKind::MonogamyProduct) {
    throw ConfigError("monogamy product cannot be batched from one sample set");
  }
  Split split = split_by_basis(samples);
  BatchedWitness out;
  out.kind = kind;
  out.batch_size = batch_size;

  for (auto* part : {&split.x, &split.p}) {
    const std::size_t rem = part->size() % batch_size;
    if (rem == 0) continue;
    if (trim == TrimPolicy::Reject) {
      throw ConfigError("per-basis trial counts (" + std::to_string(split.x.size()) + " X, " +
                        std::to_string(split.p.size()) + " P) do not divide into batches of " +
                        std::to_string(batch_size) + "; enable trimming to drop partial batches");
    }
    part->resize(part->size() - rem);
    out.trimmed_trials += rem;
  }

  const std::size_t bx = split.x.size() / batch_size;
  const std::size_t bp = split.p.size() / batch_size;
  const std::size_t pairs = std::min(bx, bp);
  out.unpaired_batches = std::max(bx, bp) - pairs;
  if (pairs < 2) {
    throw ConfigError("need at least two batch pairs, got " + std::to_string(pairs));
  }

  const std::span<const JointSample> xs(split.x);
  const std::span<const JointSample> ps(split.p);
  out.batch_values.reserve(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto moments =
        batch_moments(xs.subspan(k * batch_size, batch_size), ps.subspan(k * batch_size, batch_size));
    out.batch_values.push_back(evaluate_witness(kind, moments).value);
  }

  double sum = 0.0;
  for (double v : out.batch_values) sum += v;
  out.mean = sum / static_cast<double>(pairs);
  double ss = 0.0;
  for (double v : out.batch_values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(pairs - 1) / static_cast<double>(pairs));
  return out;
}

WitnessEstimate estimate_witness(std::span<const JointSample> samples, WitnessKind kind,
                                 std::uint32_t batch_size, TrimPolicy trim) {
  const MomentEstimate moments = estimate_moments(samples, batch_size);
  WitnessEstimate out;
  out.pooled = evaluate_witness(kind, moments.moments());
  out.pooled.alice_dataset = moments.alice_dataset;
  out.batches = batched_witness(samples, kind, batch_size, trim);
  return out;
}

}  // namespace cvsteer
