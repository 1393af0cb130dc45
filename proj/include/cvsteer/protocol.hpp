// Trial-by-trial enactment of the verification protocol.
//
// Per trial t the source prepares its hidden tuple from the Tuple substream,
// then Charlie draws the basis from the independent Basis substream and both
// parties answer in that basis. Sources never see the basis while preparing.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cvsteer/moments.hpp"
#include "cvsteer/sampler.hpp"

namespace cvsteer {

enum class Basis { X, P };

std::string_view to_string(Basis b);
Basis parse_basis(std::string_view s);

struct TrialRecord {
  std::uint64_t index = 0;
  Basis basis = Basis::X;
  double alice = 0.0;
  double bob = 0.0;
  // Full tuple retained by the source; absent for the honest source.
  std::optional<PhasePoint> eve;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ScenarioConfig {
  Scenario strategy = Scenario::ClassicalLhv;
  SqueezeParameter r{0.0};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  // Charlie's basis substream seed; defaults to `seed`.
  std::optional<std::uint64_t> basis_seed;
  std::uint32_t batch_size = 10;
  unsigned threads = 1;

  // Throws ConfigError. trials must be a positive multiple of batch_size.
  void validate() const;
  std::uint64_t effective_basis_seed() const { return basis_seed.value_or(seed); }
};

struct Response {
  double alice = 0.0;
  double bob = 0.0;
  std::optional<PhasePoint> ledger;
};

class SourceStrategy {
 public:
  virtual ~SourceStrategy() = default;

  // Runs before Charlie's basis for this trial exists.
  virtual PhasePoint prepare(const ScenarioConfig& config, std::uint64_t trial) const = 0;

  virtual Response respond(const ScenarioConfig& config, std::uint64_t trial,
                           const PhasePoint& hidden, Basis basis) const = 0;
};

std::unique_ptr<SourceStrategy> make_strategy(Scenario s);

Basis charlie_basis(std::uint64_t basis_seed, std::uint64_t trial);

std::vector<TrialRecord> run_protocol(const ScenarioConfig& config);
std::vector<TrialRecord> run_protocol(const ScenarioConfig& config, const SourceStrategy& strategy);

// One same-basis observation of Alice together with a partner's value
// (Bob's report, or Eve's stored estimate).
struct JointSample {
  std::uint64_t index = 0;
  Basis basis = Basis::X;
  double alice = 0.0;
  double partner = 0.0;
};

std::vector<JointSample> alice_bob_samples(std::span<const TrialRecord> records);

// Pairs Alice's reported value with Eve's stored amplitude for the same
// quadrature. Throws ConfigError when a record has no ledger.
std::vector<JointSample> eve_inference_records(std::span<const TrialRecord> records);

// Re-runs the protocol with a different basis seed and reports whether every
// ledger tuple is bit-identical, i.e. the hidden variables ignore the basis.
bool replay_basis_independence(const ScenarioConfig& config, std::uint64_t alternate_basis_seed);
bool replay_basis_independence(const ScenarioConfig& config, std::uint64_t alternate_basis_seed,
                               const SourceStrategy& strategy);

// Line-delimited text: header, then one comma-separated record per line with
// 17 significant digits. Eve fields are empty when there is no ledger.
void write_records(std::ostream& out, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_records(std::istream& in);

}  // namespace cvsteer
