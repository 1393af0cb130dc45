#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <thread>
#include <vector>

#include "cvsteer/sampler.hpp"
#include "test_support.hpp"

using namespace cvsteer;
using cvsteer::testing::covariance_se;
using cvsteer::testing::draw_wigner;
using cvsteer::testing::sample_covariance;

namespace {
constexpr std::size_t kDraws = 100000;
}

// =============================================================================
// Generator
// =============================================================================

TEST(CounterRng, UniformInOpenInterval) {
  CounterRng rng(SeededStream{7, 3});
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(CounterRng, StandardNormalMoments) {
  CounterRng rng(SeededStream{11, 0});
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.standard_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum_sq / n - mean * mean, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(CounterRng, SubstreamsDiffer) {
  CounterRng a(SeededStream::for_trial(42, StreamDomain::Tuple, 0));
  CounterRng b(SeededStream::for_trial(42, StreamDomain::Tuple, 1));
  CounterRng c(SeededStream::for_trial(42, StreamDomain::Basis, 0));
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
}

// =============================================================================
// sample_wigner
// =============================================================================

TEST(SampleWigner, VacuumMarginal) {
  const auto pts = draw_wigner(0.0, 5, kDraws);
  const auto cov = sample_covariance(pts);
  const double se = 0.25 * std::sqrt(2.0 / kDraws);
  EXPECT_NEAR(cov(0, 0), 0.25, 3 * se);
}

TEST(SampleWigner, DifferenceVarianceAt07) {
  const auto pts = draw_wigner(0.7, 9, kDraws);
  std::vector<double> d;
  double mean = 0.0;
  for (const auto& p : pts) {
    d.push_back(p.x_a - p.x_b);
    mean += d.back();
  }
  mean /= kDraws;
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= kDraws - 1;
  const double truth = 0.123298481970803238;  // exp(-1.4)/2
  EXPECT_NEAR(var, truth, 3 * truth * std::sqrt(2.0 / kDraws));
}

TEST(SampleWigner, DeterministicSerialVersusThreads) {
  const auto stream = SeededStream::for_trial(42, StreamDomain::Tuple, 17);
  const PhasePoint serial = sample_wigner(SqueezeParameter(0.7), stream);
  PhasePoint threaded;
  std::thread([&] { threaded = sample_wigner(SqueezeParameter(0.7), stream); }).join();
  EXPECT_EQ(std::memcmp(&serial, &threaded, sizeof(PhasePoint)), 0);
  // Order independence: drawing other trials first does not matter.
  (void)sample_wigner(SqueezeParameter(0.7), SeededStream::for_trial(42, StreamDomain::Tuple, 3));
  EXPECT_EQ(sample_wigner(SqueezeParameter(0.7), stream), serial);
}

TEST(SampleWigner, CovarianceMatchesModelWithin4Se) {
  for (double r : {0.0, 0.35, 0.7, 1.4}) {
    const auto pts = draw_wigner(r, 1234, kDraws);
    const auto sample = sample_covariance(pts);
    const auto truth = tmss_covariance(SqueezeParameter(r));
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        EXPECT_NEAR(sample(i, j), truth(i, j), 4 * covariance_se(truth, i, j, kDraws))
            << "r=" << r << " entry " << i << "," << j;
      }
    }
  }
}

TEST(SampleWigner, SumAndDifferenceUncorrelated) {
  const auto pts = draw_wigner(0.7, 77, kDraws);
  double ms = 0, md = 0;
  for (const auto& p : pts) {
    ms += p.x_a + p.x_b;
    md += p.x_a - p.x_b;
  }
  ms /= kDraws;
  md /= kDraws;
  double ss = 0, dd = 0, sd = 0;
  for (const auto& p : pts) {
    const double s = p.x_a + p.x_b - ms;
    const double d = p.x_a - p.x_b - md;
    ss += s * s;
    dd += d * d;
    sd += s * d;
  }
  EXPECT_LT(std::abs(sd / std::sqrt(ss * dd)), 4.0 / std::sqrt(kDraws));
}

// =============================================================================
// add_coherent_noise
// =============================================================================

TEST(CoherentNoise, VarianceOnZeroPoint) {
  double sum = 0, sum_sq = 0;
  for (std::size_t t = 0; t < kDraws; ++t) {
    const auto p = add_coherent_noise(PhasePoint{}, SeededStream::for_trial(3, StreamDomain::CoherentNoise, t));
    sum += p.x_a;
    sum_sq += p.x_a * p.x_a;
    EXPECT_EQ(p.x_b, 0.0);
    EXPECT_EQ(p.p_b, 0.0);
  }
  const double mean = sum / kDraws;
  const double var = (sum_sq - kDraws * mean * mean) / (kDraws - 1);
  EXPECT_NEAR(var, 0.25, 3 * 0.25 * std::sqrt(2.0 / kDraws));
}

TEST(CoherentNoise, HybridMomentsAt07) {
  const auto clean = draw_wigner(0.7, 21, kDraws);
  std::vector<PhasePoint> noisy;
  for (std::size_t t = 0; t < kDraws; ++t) {
    noisy.push_back(add_coherent_noise(clean[t], SeededStream::for_trial(21, StreamDomain::CoherentNoise, t)));
    // Bob's side is bitwise untouched.
    EXPECT_EQ(std::memcmp(&noisy.back().x_b, &clean[t].x_b, 2 * sizeof(double)), 0);
  }
  const auto cov = sample_covariance(noisy);
  auto truth = tmss_covariance(SqueezeParameter(0.7));
  truth(0, 0) += 0.25;
  truth(1, 1) += 0.25;
  EXPECT_NEAR(cov(0, 0), 0.787724616348285133, 3 * covariance_se(truth, 0, 0, kDraws));
  EXPECT_NEAR(cov(0, 2), 0.476075375362883514, 3 * covariance_se(truth, 0, 2, kDraws));
}
