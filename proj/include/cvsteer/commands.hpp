// Command implementations behind the cvsteer CLI. Each writes deterministic
// CSV (or key,value report lines) to the given stream; diagnostics go to `log`.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvsteer/stats.hpp"

namespace cvsteer {

struct SweepSpec {
  double r_min = 0.0;
  double r_max = 1.5;
  std::uint32_t r_steps = 16;
  std::vector<Scenario> scenarios{Scenario::ClassicalLhv, Scenario::HybridCoherent};
  std::vector<WitnessKind> witnesses{WitnessKind::DuanSum, WitnessKind::EntHalfThreshold,
                                     WitnessKind::EntProduct, WitnessKind::EprSteering};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint32_t batch_size = 10;
  unsigned threads = 1;
  TrimPolicy trim = TrimPolicy::Truncate;

  void validate() const;
  // r_steps evenly spaced points from r_min to r_max inclusive.
  std::vector<double> grid() const;
};

struct SweepRow {
  double r = 0.0;
  Scenario scenario = Scenario::ClassicalLhv;
  WitnessKind witness = WitnessKind::EntProduct;
  double estimate = 0.0;
  double std_error = 0.0;
  double analytic = 0.0;
  Verdict verdict = Verdict::NotSatisfied;
  std::size_t trimmed_trials = 0;
  std::size_t unpaired_batches = 0;
};

// Closed-form value of a witness for the given scenario.
double analytic_value(Scenario s, WitnessKind k, SqueezeParameter r);

// Rows sorted by r, then scenario name, then witness name.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Curve letter for the figure presets: a/b classical Ent/EPR, c/d hybrid.
std::string figure_curve(Scenario s, WitnessKind k);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_curve);

void cmd_sweep(const SweepSpec& spec, std::ostream& out, std::ostream& log);

// Presets: classical and hybrid Ent/EPR on r = 0, 0.1, ..., 1.5, batch 10.
SweepSpec figure_preset(std::uint64_t trials, std::uint64_t seed, unsigned threads);
void cmd_fig3(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& log);
void cmd_fig4(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& log);

struct PointSpec {
  Scenario scenario = Scenario::ClassicalLhv;
  double r = 0.7;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  std::uint32_t batch_size = 10;
  unsigned threads = 1;
  TrimPolicy trim = TrimPolicy::Truncate;

  ScenarioConfig config() const;
};

// Per-trial phase points as Alice and Bob hold them (Alice's hybrid values
// include the coherent-state noise), Charlie's basis, and a flag on the
// first batch of trials.
void cmd_dump_samples(const PointSpec& spec, std::ostream& out);

struct MonogamyReport {
  WitnessEstimate epr_ab;
  WitnessEstimate epr_ae;
  WitnessReport product;
};

MonogamyReport run_monogamy(const PointSpec& spec);
void cmd_monogamy(const PointSpec& spec, std::ostream& out, std::ostream& log);

inline constexpr const char* kTrustedVerdict = "consistent with trusted-Alice quantum measurement";
inline constexpr const char* kViolationVerdict =
    "monogamy violated: Alice's reported values cannot be trusted quantum measurements";

}  // namespace cvsteer
