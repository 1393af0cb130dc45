#include "cvsteer/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>
#include <tuple>

#include "cvsteer/errors.hpp"
#include "cvsteer/format.hpp"

namespace cvsteer {

namespace {

void report_trimming(const std::vector<SweepRow>& rows, std::ostream& log) {
  std::size_t trimmed = 0;
  std::size_t unpaired = 0;
  for (const auto& row : rows) {
    trimmed += row.trimmed_trials;
    unpaired += row.unpaired_batches;
  }
  if (trimmed > 0 || unpaired > 0) {
    log << "note: " << trimmed << " trials in partial batches and " << unpaired
        << " unpaired batches were left out of the batch errors across " << rows.size()
        << " rows\n";
  }
}

std::vector<SweepRow> rows_for_point(const SweepSpec& spec, double r, Scenario scenario) {
  ScenarioConfig config;
  config.strategy = scenario;
  config.r = SqueezeParameter(r);
  config.trials = spec.trials;
  config.seed = spec.seed;
  config.batch_size = spec.batch_size;
  const auto records = run_protocol(config);
  const auto samples = alice_bob_samples(records);

  std::vector<SweepRow> rows;
  for (WitnessKind kind : spec.witnesses) {
    const WitnessEstimate est = estimate_witness(samples, kind, spec.batch_size, spec.trim);
    SweepRow row;
    row.r = r;
    row.scenario = scenario;
    row.witness = kind;
    row.estimate = est.estimate();
    row.std_error = est.std_error();
    row.analytic = analytic_value(scenario, kind, config.r);
    row.verdict = est.pooled.verdict;
    row.trimmed_trials = est.batches.trimmed_trials;
    row.unpaired_batches = est.batches.unpaired_batches;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void SweepSpec::validate() const {
  if (!std::isfinite(r_min) || !std::isfinite(r_max) || r_min < 0.0) {
    throw ConfigError("r range must be finite and non-negative");
  }
  if (r_min > r_max) throw ConfigError("r-min must not exceed r-max");
  if (r_steps == 0) throw ConfigError("r-steps must be at least 1");
  if (r_steps == 1 && r_min != r_max) throw ConfigError("a single r step needs r-min == r-max");
  if (scenarios.empty()) throw ConfigError("no scenarios selected");
  if (witnesses.empty()) throw ConfigError("no witnesses selected");
  if (std::find(witnesses.begin(), witnesses.end(), WitnessKind::MonogamyProduct) != witnesses.end()) {
    throw ConfigError("use the monogamy command for the monogamy product");
  }
  if (threads == 0) throw ConfigError("thread count must be positive");
  ScenarioConfig probe;
  probe.trials = trials;
  probe.batch_size = batch_size;
  probe.validate();
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> out;
  out.reserve(r_steps);
  if (r_steps == 1) {
    out.push_back(r_min);
    return out;
  }
  for (std::uint32_t i = 0; i < r_steps; ++i) {
    out.push_back(r_min + (r_max - r_min) * i / (r_steps - 1));
  }
  return out;
}

double analytic_value(Scenario s, WitnessKind k, SqueezeParameter r) {
  const AnalyticWitnesses a = analytic_witnesses(s, r);
  switch (k) {
    case WitnessKind::EntProduct:
    case WitnessKind::EntHalfThreshold:
      return a.ent;
    case WitnessKind::EprSteering:
      return a.epr;
    case WitnessKind::DuanSum: {
      const auto m = s == Scenario::HybridCoherent ? hybrid_moments(r) : classical_moments(r);
      return duan_sum(m.x, m.p).value;
    }
    case WitnessKind::MonogamyProduct:
      break;
  }
  throw ConfigError("no analytic value for the monogamy product in a sweep");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<Scenario> scenarios = spec.scenarios;
  std::sort(scenarios.begin(), scenarios.end(),
            [](Scenario a, Scenario b) { return to_string(a) < to_string(b); });
  scenarios.erase(std::unique(scenarios.begin(), scenarios.end()), scenarios.end());

  std::vector<std::pair<double, Scenario>> points;
  for (double r : spec.grid()) {
    for (Scenario s : scenarios) points.emplace_back(r, s);
  }

  std::vector<std::vector<SweepRow>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = rows_for_point(spec, points[i].first, points[i].second);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    const unsigned n = std::max(1U, std::min<unsigned>(spec.threads, points.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SweepRow> rows;
  for (auto& chunk : results) {
    std::sort(chunk.begin(), chunk.end(), [](const SweepRow& a, const SweepRow& b) {
      return to_string(a.witness) < to_string(b.witness);
    });
    rows.insert(rows.end(), chunk.begin(), chunk.end());
  }
  return rows;
}

std::string figure_curve(Scenario s, WitnessKind k) {
  const bool ent = k == WitnessKind::EntProduct;
  const bool epr = k == WitnessKind::EprSteering;
  if (s == Scenario::ClassicalLhv && ent) return "a";
  if (s == Scenario::ClassicalLhv && epr) return "b";
  if (s == Scenario::HybridCoherent && ent) return "c";
  if (s == Scenario::HybridCoherent && epr) return "d";
  return "";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_curve) {
  out << "r,scenario,witness,estimate,stderr,analytic,verdict" << (with_curve ? ",curve" : "")
      << '\n';
  for (const auto& row : rows) {
    out << format_double(row.r) << ',' << to_string(row.scenario) << ',' << to_string(row.witness)
        << ',' << format_double(row.estimate) << ',' << format_double(row.std_error) << ','
        << format_double(row.analytic) << ',' << to_string(row.verdict);
    if (with_curve) out << ',' << figure_curve(row.scenario, row.witness);
    out << '\n';
  }
  if (!out) throw IoError("failed to write CSV output");
}

void cmd_sweep(const SweepSpec& spec, std::ostream& out, std::ostream& log) {
  const auto rows = run_sweep(spec);
  report_trimming(rows, log);
  write_sweep_csv(out, rows, false);
}

SweepSpec figure_preset(std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  SweepSpec spec;
  spec.r_min = 0.0;
  spec.r_max = 1.5;
  spec.r_steps = 16;
  spec.scenarios = {Scenario::ClassicalLhv, Scenario::HybridCoherent};
  spec.witnesses = {WitnessKind::EntProduct, WitnessKind::EprSteering};
  spec.trials = trials;
  spec.seed = seed;
  spec.batch_size = 10;
  spec.threads = threads;
  return spec;
}

void cmd_fig3(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& log) {
  const auto rows = run_sweep(figure_preset(1000, seed, threads));
  report_trimming(rows, log);
  write_sweep_csv(out, rows, true);
}

void cmd_fig4(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& log) {
  const auto rows = run_sweep(figure_preset(100, seed, threads));
  report_trimming(rows, log);
  write_sweep_csv(out, rows, true);
}

ScenarioConfig PointSpec::config() const {
  ScenarioConfig config;
  config.strategy = scenario;
  config.r = SqueezeParameter(r);
  config.trials = trials;
  config.seed = seed;
  config.batch_size = batch_size;
  config.threads = threads;
  config.validate();
  return config;
}

void cmd_dump_samples(const PointSpec& spec, std::ostream& out) {
  const ScenarioConfig config = spec.config();
  out << "trial,basis,x_a,p_a,x_b,p_b,first_batch\n";
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    PhasePoint pt = sample_wigner(config.r, SeededStream::for_trial(config.seed, StreamDomain::Tuple, t));
    if (config.strategy == Scenario::HybridCoherent) {
      pt = add_coherent_noise(pt, SeededStream::for_trial(config.seed, StreamDomain::CoherentNoise, t));
    }
    out << t << ',' << to_string(charlie_basis(config.effective_basis_seed(), t)) << ','
        << format_double(pt.x_a) << ',' << format_double(pt.p_a) << ',' << format_double(pt.x_b)
        << ',' << format_double(pt.p_b) << ',' << (t < config.batch_size ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed to write sample dump");
}

MonogamyReport run_monogamy(const PointSpec& spec) {
  const ScenarioConfig config = spec.config();
  if (config.strategy == Scenario::HonestQuantum) {
    throw ConfigError("the honest source keeps no ledger; Eve has nothing to infer from");
  }
  const auto records = run_protocol(config);
  const auto bob = alice_bob_samples(records);
  const auto eve = eve_inference_records(records);
  MonogamyReport out;
  out.epr_ab = estimate_witness(bob, WitnessKind::EprSteering, spec.batch_size, spec.trim);
  out.epr_ae = estimate_witness(eve, WitnessKind::EprSteering, spec.batch_size, spec.trim);
  out.product = monogamy_product(out.epr_ab.pooled, out.epr_ae.pooled);
  return out;
}

void cmd_monogamy(const PointSpec& spec, std::ostream& out, std::ostream& log) {
  const MonogamyReport rep = run_monogamy(spec);
  const std::size_t trimmed = rep.epr_ab.batches.trimmed_trials;
  if (trimmed > 0) log << "note: " << trimmed << " trials in partial batches left out of batch errors\n";
  out << "scenario," << to_string(spec.scenario) << '\n'
      << "r," << format_double(spec.r) << '\n'
      << "trials," << spec.trials << '\n'
      << "seed," << spec.seed << '\n'
      << "epr_ab," << format_double(rep.epr_ab.estimate()) << '\n'
      << "epr_ab_stderr," << format_double(rep.epr_ab.std_error()) << '\n'
      << "epr_ae," << format_double(rep.epr_ae.estimate()) << '\n'
      << "epr_ae_stderr," << format_double(rep.epr_ae.std_error()) << '\n'
      << "product," << format_double(rep.product.value) << '\n'
      << "verdict," << (rep.product.satisfied() ? kTrustedVerdict : kViolationVerdict) << '\n';
  if (!out) throw IoError("failed to write monogamy report");
}

}  // namespace cvsteer
