#include "cvsteer/protocol.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "cvsteer/errors.hpp"
#include "cvsteer/format.hpp"

namespace cvsteer {

namespace {

constexpr std::string_view kHeader = "trial,basis,alice,bob,eve_x_a,eve_p_a,eve_x_b,eve_p_b";

double pick_alice(const PhasePoint& pt, Basis b) { return b == Basis::X ? pt.x_a : pt.p_a; }
double pick_bob(const PhasePoint& pt, Basis b) { return b == Basis::X ? pt.x_b : pt.p_b; }

class WignerSource : public SourceStrategy {
 public:
  PhasePoint prepare(const ScenarioConfig& config, std::uint64_t trial) const override {
    return sample_wigner(config.r, SeededStream::for_trial(config.seed, StreamDomain::Tuple, trial));
  }
};

// Reports genuine quadrature statistics and keeps no copy of them.
class HonestSource final : public WignerSource {
 public:
  Response respond(const ScenarioConfig&, std::uint64_t, const PhasePoint& hidden,
                   Basis basis) const override {
    return {pick_alice(hidden, basis), pick_bob(hidden, basis), std::nullopt};
  }
};

class ClassicalSource final : public WignerSource {
 public:
  Response respond(const ScenarioConfig&, std::uint64_t, const PhasePoint& hidden,
                   Basis basis) const override {
    return {pick_alice(hidden, basis), pick_bob(hidden, basis), hidden};
  }
};

// Alice measures the coherent state |x_a + i p_a> fed to her station.
class HybridSource final : public WignerSource {
 public:
  Response respond(const ScenarioConfig& config, std::uint64_t trial, const PhasePoint& hidden,
                   Basis basis) const override {
    const PhasePoint measured = add_coherent_noise(
        hidden, SeededStream::for_trial(config.seed, StreamDomain::CoherentNoise, trial));
    return {pick_alice(measured, basis), pick_bob(hidden, basis), hidden};
  }
};

bool bit_equal(const PhasePoint& a, const PhasePoint& b) {
  auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  return bits(a.x_a) == bits(b.x_a) && bits(a.p_a) == bits(b.p_a) && bits(a.x_b) == bits(b.x_b) &&
         bits(a.p_b) == bits(b.p_b);
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw IoError("malformed number '" + field + "' in trial records");
  }
  if (used != field.size()) throw IoError("malformed number '" + field + "' in trial records");
  return v;
}

}  // namespace

std::string_view to_string(Basis b) { return b == Basis::X ? "X" : "P"; }

Basis parse_basis(std::string_view s) {
  if (s == "X") return Basis::X;
  if (s == "P") return Basis::P;
  throw ConfigError("unknown basis '" + std::string(s) + "'");
}

void ScenarioConfig::validate() const {
  if (trials == 0) throw ConfigError("trial count must be positive");
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (trials % batch_size != 0) {
    throw ConfigError("trial count " + std::to_string(trials) + " is not a multiple of batch size " +
                      std::to_string(batch_size));
  }
  if (threads == 0) throw ConfigError("thread count must be positive");
}

std::unique_ptr<SourceStrategy> make_strategy(Scenario s) {
  switch (s) {
    case Scenario::HonestQuantum:
      return std::make_unique<HonestSource>();
    case Scenario::ClassicalLhv:
      return std::make_unique<ClassicalSource>();
    case Scenario::HybridCoherent:
      return std::make_unique<HybridSource>();
  }
  throw ConfigError("unknown scenario");
}

Basis charlie_basis(std::uint64_t basis_seed, std::uint64_t trial) {
  CounterRng rng(SeededStream::for_trial(basis_seed, StreamDomain::Basis, trial));
  return (rng.next_u64() >> 63) == 0 ? Basis::X : Basis::P;
}

std::vector<TrialRecord> run_protocol(const ScenarioConfig& config) {
  return run_protocol(config, *make_strategy(config.strategy));
}

std::vector<TrialRecord> run_protocol(const ScenarioConfig& config, const SourceStrategy& strategy) {
  config.validate();
  std::vector<TrialRecord> records(config.trials);
  const std::uint64_t basis_seed = config.effective_basis_seed();

  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) {
      const PhasePoint hidden = strategy.prepare(config, t);
      const Basis basis = charlie_basis(basis_seed, t);
      Response r = strategy.respond(config, t, hidden, basis);
      records[t] = TrialRecord{t, basis, r.alice, r.bob, r.ledger};
    }
  };

  const std::uint64_t workers = std::min<std::uint64_t>(config.threads, config.trials);
  if (workers <= 1) {
    fill(0, config.trials);
    return records;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (config.trials + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(config.trials, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          fill(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

std::vector<JointSample> alice_bob_samples(std::span<const TrialRecord> records) {
  std::vector<JointSample> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.index, r.basis, r.alice, r.bob});
  return out;
}

std::vector<JointSample> eve_inference_records(std::span<const TrialRecord> records) {
  std::vector<JointSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.eve) throw ConfigError("Eve has no ledger for trial " + std::to_string(r.index));
    out.push_back({r.index, r.basis, r.alice, pick_alice(*r.eve, r.basis)});
  }
  return out;
}

bool replay_basis_independence(const ScenarioConfig& config, std::uint64_t alternate_basis_seed) {
  return replay_basis_independence(config, alternate_basis_seed, *make_strategy(config.strategy));
}

bool replay_basis_independence(const ScenarioConfig& config, std::uint64_t alternate_basis_seed,
                               const SourceStrategy& strategy) {
  if (config.strategy == Scenario::HonestQuantum) {
    throw ConfigError("honest source keeps no ledger to replay");
  }
  ScenarioConfig alternate = config;
  alternate.basis_seed = alternate_basis_seed;
  const auto first = run_protocol(config, strategy);
  const auto second = run_protocol(alternate, strategy);
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!first[i].eve || !second[i].eve) {
      throw ConfigError("strategy produced a record without a ledger");
    }
    if (!bit_equal(*first[i].eve, *second[i].eve)) return false;
  }
  return true;
}

void write_records(std::ostream& out, std::span<const TrialRecord> records) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.index << ',' << to_string(r.basis) << ',' << format_double(r.alice) << ','
        << format_double(r.bob);
    if (r.eve) {
      out << ',' << format_double(r.eve->x_a) << ',' << format_double(r.eve->p_a) << ','
          << format_double(r.eve->x_b) << ',' << format_double(r.eve->p_b);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  if (!out) throw IoError("failed to write trial records");
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw IoError("trial records must start with header '" + std::string(kHeader) + "'");
  }
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 8) throw IoError("trial record needs 8 fields: " + line);
    TrialRecord r;
    try {
      r.index = std::stoull(fields[0]);
      r.basis = parse_basis(fields[1]);
    } catch (const std::exception&) {
      throw IoError("malformed trial record: " + line);
    }
    r.alice = parse_double(fields[2]);
    r.bob = parse_double(fields[3]);
    const bool any_eve = std::any_of(fields.begin() + 4, fields.end(),
                                     [](const std::string& f) { return !f.empty(); });
    if (any_eve) {
      r.eve = PhasePoint{parse_double(fields[4]), parse_double(fields[5]), parse_double(fields[6]),
                         parse_double(fields[7])};
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace cvsteer
