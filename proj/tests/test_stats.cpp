#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cvsteer/errors.hpp"
#include "cvsteer/stats.hpp"

using namespace cvsteer;

namespace {

std::vector<JointSample> run(Scenario s, double r, std::uint64_t trials, std::uint64_t seed = 42) {
  ScenarioConfig c;
  c.strategy = s;
  c.r = SqueezeParameter(r);
  c.trials = trials;
  c.seed = seed;
  return alice_bob_samples(run_protocol(c));
}

// X and P samples alternating, values from `f(index)`.
template <typename F>
std::vector<JointSample> synthetic(std::size_t per_basis, F f) {
  std::vector<JointSample> out;
  for (std::size_t i = 0; i < 2 * per_basis; ++i) {
    const auto [a, b] = f(i);
    out.push_back({i, i % 2 == 0 ? Basis::X : Basis::P, a, b});
  }
  return out;
}

constexpr double kCosh14Over4 = 0.537724616348285133;
constexpr double kSinh14Over4 = 0.476075375362883514;
constexpr double kExpMinus14 = 0.246596963941606477;

}  // namespace

// =============================================================================
// estimate_moments
// =============================================================================

TEST(EstimateMoments, ClassicalAt07) {
  const auto samples = run(Scenario::ClassicalLhv, 0.7, 100000);
  const auto est = estimate_moments(samples);
  for (const auto* sec : {&est.x, &est.p}) {
    const double k = static_cast<double>(sec->trials);
    const double se_var = kCosh14Over4 * std::sqrt(2.0 / k);
    const double se_cov = std::sqrt((kCosh14Over4 * kCosh14Over4 + kSinh14Over4 * kSinh14Over4) / k);
    EXPECT_NEAR(sec->summary.n, kCosh14Over4, 3 * se_var);
    EXPECT_NEAR(sec->summary.m, kCosh14Over4, 3 * se_var);
    EXPECT_NEAR(sec->summary.c, kSinh14Over4, 3 * se_cov);
    // Plug-in errors agree with Gaussian theory.
    EXPECT_NEAR(sec->se_n, se_var, 0.1 * se_var);
    EXPECT_NEAR(sec->se_c, se_cov, 0.1 * se_cov);
  }
  EXPECT_EQ(est.x.trials + est.p.trials, 100000U);
}

TEST(EstimateMoments, ConstantRecordsGiveZeros) {
  const auto samples = synthetic(10, [](std::size_t) { return std::pair{1.5, -2.0}; });
  const auto est = estimate_moments(samples);
  EXPECT_EQ(est.x.summary, (MomentSummary{0, 0, 0}));
  EXPECT_EQ(est.p.summary, (MomentSummary{0, 0, 0}));
  EXPECT_EQ(est.x.se_n, 0.0);
}

TEST(EstimateMoments, HybridVacuum) {
  const auto samples = run(Scenario::HybridCoherent, 0.0, 100000);
  const auto est = estimate_moments(samples);
  const double k = static_cast<double>(est.x.trials);
  EXPECT_NEAR(est.x.summary.n, 0.5, 3 * 0.5 * std::sqrt(2 / k));
  EXPECT_NEAR(est.x.summary.m, 0.25, 3 * 0.25 * std::sqrt(2 / k));
  EXPECT_NEAR(est.x.summary.c, 0.0, 3 * std::sqrt(0.5 * 0.25 / k));
}

TEST(EstimateMoments, UnbiasedNormalisation) {
  // Two points per basis: values 0 and 2 have unbiased variance 2.
  std::vector<JointSample> s{{0, Basis::X, 0, 0}, {1, Basis::X, 2, 2}, {2, Basis::P, 0, 0}, {3, Basis::P, 2, 2}};
  const auto est = estimate_moments(s);
  EXPECT_DOUBLE_EQ(est.x.summary.n, 2.0);
  EXPECT_DOUBLE_EQ(est.x.summary.c, 2.0);
  EXPECT_DOUBLE_EQ(est.p.summary.c, -2.0);
}

TEST(EstimateMoments, NeedsTwoTrialsPerBasis) {
  std::vector<JointSample> s{{0, Basis::X, 0, 0}, {1, Basis::X, 2, 2}, {2, Basis::P, 0, 0}};
  EXPECT_THROW(estimate_moments(s), ConfigError);
}

TEST(EstimateMoments, ErrorsShrinkWithMoreBatches) {
  const auto small = estimate_moments(run(Scenario::ClassicalLhv, 0.7, 20000, 5));
  const auto large = estimate_moments(run(Scenario::ClassicalLhv, 0.7, 80000, 6));
  EXPECT_GT(large.batch_count, 3 * small.batch_count);
  EXPECT_NEAR(large.x.se_c / small.x.se_c, 0.5, 0.08);
}

TEST(EstimateMoments, ConvergesToCovarianceModel) {
  for (double r : {0.35, 1.4}) {
    const auto est = estimate_moments(run(Scenario::ClassicalLhv, r, 100000, 17));
    const auto truth = classical_moments(SqueezeParameter(r));
    for (const auto& [sec, t] : {std::pair{est.x, truth.x}, std::pair{est.p, truth.p}}) {
      EXPECT_NEAR(sec.summary.n, t.n, 4 * sec.se_n) << "r=" << r;
      EXPECT_NEAR(sec.summary.m, t.m, 4 * sec.se_m) << "r=" << r;
      EXPECT_NEAR(sec.summary.c, t.c, 4 * sec.se_c) << "r=" << r;
    }
  }
}

// =============================================================================
// batched_witness
// =============================================================================

TEST(BatchedWitness, ConstantDataHasZeroError) {
  const auto samples = synthetic(40, [](std::size_t) { return std::pair{0.3, 0.1}; });
  const auto b = batched_witness(samples, WitnessKind::EntProduct);
  EXPECT_EQ(b.batch_values.size(), 4U);
  EXPECT_EQ(b.std_error, 0.0);
  EXPECT_EQ(b.trimmed_trials, 0U);
}

TEST(BatchedWitness, IndivisibleCountsNeedTrimFlag) {
  const auto samples = synthetic(25, [](std::size_t i) { return std::pair{double(i % 7), double(i % 5)}; });
  EXPECT_THROW(batched_witness(samples, WitnessKind::EprSteering), ConfigError);
  const auto b = batched_witness(samples, WitnessKind::EprSteering, 10, TrimPolicy::Truncate);
  EXPECT_EQ(b.trimmed_trials, 10U);
  EXPECT_EQ(b.batch_values.size(), 2U);
}

TEST(BatchedWitness, UnpairedBatchesDropped) {
  std::vector<JointSample> s;
  for (std::uint64_t i = 0; i < 30; ++i) s.push_back({i, Basis::X, double(i % 4), double(i % 3)});
  for (std::uint64_t i = 30; i < 50; ++i) s.push_back({i, Basis::P, double(i % 4), double(i % 3)});
  const auto b = batched_witness(s, WitnessKind::DuanSum);
  EXPECT_EQ(b.batch_values.size(), 2U);
  EXPECT_EQ(b.unpaired_batches, 1U);
}

TEST(BatchedWitness, BatchesFollowTrialOrder) {
  // Shuffled input gives the same batches as sorted input.
  auto samples = run(Scenario::ClassicalLhv, 0.5, 1000);
  const auto sorted = batched_witness(samples, WitnessKind::EntProduct, 10, TrimPolicy::Truncate);
  std::reverse(samples.begin(), samples.end());
  const auto reversed = batched_witness(samples, WitnessKind::EntProduct, 10, TrimPolicy::Truncate);
  EXPECT_EQ(sorted.batch_values, reversed.batch_values);
}

TEST(BatchedWitness, FigureScaleBatchCounts) {
  const auto small = batched_witness(run(Scenario::ClassicalLhv, 0.7, 100), WitnessKind::EprSteering, 10,
                                     TrimPolicy::Truncate);
  const auto large = batched_witness(run(Scenario::ClassicalLhv, 0.7, 1000), WitnessKind::EprSteering, 10,
                                     TrimPolicy::Truncate);
  EXPECT_GE(small.batch_values.size(), 3U);
  EXPECT_LE(small.batch_values.size(), 6U);
  EXPECT_GT(small.std_error, large.std_error);
}

TEST(BatchedWitness, ClassicalEntAt07) {
  const auto samples = run(Scenario::ClassicalLhv, 0.7, 10000, 123);
  const auto b = batched_witness(samples, WitnessKind::EntProduct, 10, TrimPolicy::Truncate);
  const auto pooled = estimate_witness(samples, WitnessKind::EntProduct, 10, TrimPolicy::Truncate);
  EXPECT_NEAR(pooled.estimate(), kExpMinus14, 3 * b.std_error);
}

TEST(BatchedWitness, BatchMeanMatchesPooledAtFigureScale) {
  // At N=100 the small-batch bias is below the band width for most seeds;
  // Duan is linear in the moments and has no gain fit, so it never drifts.
  for (Scenario s : {Scenario::ClassicalLhv, Scenario::HybridCoherent}) {
    for (WitnessKind k : {WitnessKind::EntProduct, WitnessKind::EprSteering, WitnessKind::DuanSum}) {
      int agree = 0;
      for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto est = estimate_witness(run(s, 0.7, 100, seed), k, 10, TrimPolicy::Truncate);
        agree += std::abs(est.batches.mean - est.estimate()) <= 3 * est.std_error();
      }
      EXPECT_GE(agree, k == WitnessKind::DuanSum ? 38 : 32) << to_string(s) << " " << to_string(k);
    }
  }
}

TEST(BatchedWitness, SmallBatchBiasPersistsAtLargeN) {
  // Residual variances from 10-point batches lose a degree of freedom to the
  // fitted gain, so the batch mean sits low and stays low as N grows.
  const auto est = estimate_witness(run(Scenario::ClassicalLhv, 0.7, 100000, 9), WitnessKind::EprSteering, 10,
                                    TrimPolicy::Truncate);
  EXPECT_LT(est.batches.mean, est.estimate() - 3 * est.std_error());
}

TEST(BatchedWitness, QuadruplingTrialsHalvesError) {
  double ratio_sum = 0.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto a = batched_witness(run(Scenario::ClassicalLhv, 0.7, 1000, 100 + rep), WitnessKind::EntProduct, 10,
                                   TrimPolicy::Truncate);
    const auto b = batched_witness(run(Scenario::ClassicalLhv, 0.7, 4000, 200 + rep), WitnessKind::EntProduct, 10,
                                   TrimPolicy::Truncate);
    ratio_sum += b.std_error / a.std_error;
  }
  const double ratio = ratio_sum / 20;
  EXPECT_GE(ratio, 0.4);
  EXPECT_LE(ratio, 0.6);
}

TEST(BatchedWitness, PooledCoverage) {
  // The batch-scatter error covers the pooled estimate's own scatter.
  int covered = 0;
  const double truth = 1.0 / std::cosh(1.4);
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    const auto est = estimate_witness(run(Scenario::ClassicalLhv, 0.7, 2000, 500 + rep), WitnessKind::EprSteering,
                                      10, TrimPolicy::Truncate);
    covered += std::abs(est.estimate() - truth) < 3 * est.std_error();
  }
  EXPECT_GE(covered, 36);
}

TEST(BatchedWitness, RejectsBadArguments) {
  const auto samples = run(Scenario::ClassicalLhv, 0.7, 100);
  EXPECT_THROW(batched_witness(samples, WitnessKind::EntProduct, 1, TrimPolicy::Truncate), ConfigError);
  EXPECT_THROW(batched_witness(samples, WitnessKind::MonogamyProduct, 10, TrimPolicy::Truncate), ConfigError);
  EXPECT_THROW(batched_witness(samples, WitnessKind::EntProduct, 50, TrimPolicy::Truncate), ConfigError);
}

TEST(AliceFingerprint, SameAliceDataSameTag) {
  ScenarioConfig c;
  c.strategy = Scenario::HybridCoherent;
  c.r = SqueezeParameter(0.7);
  c.trials = 500;
  const auto records = run_protocol(c);
  EXPECT_EQ(alice_fingerprint(alice_bob_samples(records)), alice_fingerprint(eve_inference_records(records)));
  c.seed = 2;
  EXPECT_NE(alice_fingerprint(alice_bob_samples(records)), alice_fingerprint(alice_bob_samples(run_protocol(c))));
}
