// cvsteer: Monte-Carlo enactment of faked continuous-variable entanglement.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error,
// 4 internal consistency failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvsteer/commands.hpp"
#include "cvsteer/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitConsistency = 4;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw cvsteer::IoError("failed to write to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw cvsteer::IoError("cannot open output file '" + path + "'");
  file << text;
  file.close();
  if (!file) throw cvsteer::IoError("failed to write output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faked CV entanglement simulator and witness evaluator"};
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool no_trim = false;

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Witness estimates over a grid of squeeze parameters");
  cvsteer::SweepSpec spec;
  std::vector<std::string> scenario_names{"classical-lhv", "hybrid-coherent"};
  std::vector<std::string> witness_names;
  std::optional<double> single_r;
  sweep->add_option("--scenario", scenario_names, "Scenarios: classical-lhv, honest-quantum, hybrid-coherent");
  sweep->add_option("--witness", witness_names, "Witnesses: ent-product, duan-sum, epr-steering, ent-half-threshold");
  auto* r_min = sweep->add_option("--r-min", spec.r_min, "Smallest squeeze parameter");
  auto* r_max = sweep->add_option("--r-max", spec.r_max, "Largest squeeze parameter");
  auto* r_steps = sweep->add_option("--r-steps", spec.r_steps, "Number of grid points");
  auto* r_single = sweep->add_option("--r", single_r, "Single squeeze parameter");
  r_single->excludes(r_min)->excludes(r_max)->excludes(r_steps);
  sweep->add_option("--trials", spec.trials, "Trials per grid point");
  sweep->add_option("--batch-size", spec.batch_size, "Trials per basis in each error batch");

  // fig3 / fig4
  auto* fig3 = app.add_subcommand("fig3", "Preset sweep with N=1000 trials");
  auto* fig4 = app.add_subcommand("fig4", "Preset sweep with N=100 trials");

  // dump-samples / monogamy
  cvsteer::PointSpec point;
  std::string point_scenario = "classical-lhv";
  auto* dump = app.add_subcommand("dump-samples", "Per-trial phase points for one scenario");
  auto* mono = app.add_subcommand("monogamy", "EPR_{A|B} * EPR_{A|E} audit against Eve's ledger");
  for (auto* cmd : {dump, mono}) {
    cmd->add_option("--scenario", point_scenario, "classical-lhv, honest-quantum or hybrid-coherent");
    cmd->add_option("--r", point.r, "Squeeze parameter");
    cmd->add_option("--trials", point.trials, "Number of trials");
    cmd->add_option("--batch-size", point.batch_size, "Trials per basis in each error batch");
  }
  point.trials = 100;

  for (auto* cmd : {sweep, fig3, fig4, dump, mono}) {
    cmd->add_option("--seed", seed, "64-bit seed");
    cmd->add_option("--out", out_path, "Output file (default stdout)");
    cmd->add_option("--threads", threads, "Worker threads; output does not depend on it");
  }
  for (auto* cmd : {sweep, mono}) {
    cmd->add_flag("--no-trim", no_trim, "Fail instead of dropping partial batches");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const auto trim = no_trim ? cvsteer::TrimPolicy::Reject : cvsteer::TrimPolicy::Truncate;
    std::ostringstream out;
    if (*sweep) {
      spec.scenarios.clear();
      for (const auto& name : scenario_names) spec.scenarios.push_back(cvsteer::parse_scenario(name));
      if (!witness_names.empty()) {
        spec.witnesses.clear();
        for (const auto& name : witness_names) spec.witnesses.push_back(cvsteer::parse_witness_kind(name));
      }
      if (single_r) {
        spec.r_min = spec.r_max = *single_r;
        spec.r_steps = 1;
      }
      spec.seed = seed;
      spec.threads = threads;
      spec.trim = trim;
      cvsteer::cmd_sweep(spec, out, std::cerr);
    } else if (*fig3) {
      cvsteer::cmd_fig3(seed, threads, out, std::cerr);
    } else if (*fig4) {
      cvsteer::cmd_fig4(seed, threads, out, std::cerr);
    } else {
      point.scenario = cvsteer::parse_scenario(point_scenario);
      point.seed = seed;
      point.threads = threads;
      point.trim = trim;
      if (*dump) {
        cvsteer::cmd_dump_samples(point, out);
      } else {
        cvsteer::cmd_monogamy(point, out, std::cerr);
      }
    }
    emit(out.str(), out_path);
  } catch (const cvsteer::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cvsteer::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitConsistency;
  }
  return 0;
}
