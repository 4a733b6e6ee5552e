// Command-line front end: simulation bundles, preset runs, oracle queries.
//
// Exit codes: 0 success (all expectations pass), 1 preset expectation
// failure, 2 configuration or usage error, 3 I/O error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "colsim/config_io.hpp"
#include "colsim/engine.hpp"
#include "colsim/experiments.hpp"
#include "colsim/output.hpp"
#include "colsim/voting.hpp"

namespace fs = std::filesystem;
using namespace colsim;

namespace {

constexpr int kOk = 0;
constexpr int kExpectationFailure = 1;
constexpr int kConfigErrorCode = 2;
constexpr int kIoErrorCode = 3;

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string token = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(value);
    } catch (const std::exception&) {
      throw ConfigError(flag, "'" + token + "' is not a number");
    }
    start = comma + 1;
  }
  return values;
}

// Runs are independent given the per-run stream split, so they can execute
// on a small pool; records are stitched back together in run order, which
// keeps the CSV output identical to a serial execution.
SimulationResult run_parallel(const ScenarioConfig& config, unsigned jobs) {
  const int runs = config.runs;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max(1, runs)));
  if (jobs <= 1 || runs <= 1) return run_scenario(config);

  std::vector<SimulationResult> slices(static_cast<std::size_t>(runs));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (int run = next.fetch_add(1); run < runs; run = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        slices[static_cast<std::size_t>(run)] = run_single(config, run);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  SimulationResult merged;
  for (SimulationResult& slice : slices) {
    for (RoundRecord& r : slice.records) merged.records.push_back(std::move(r));
    for (RunSummary& s : slice.summaries) {
      merged.summaries.push_back(std::move(s));
    }
  }
  return merged;
}

void write_bundle(const fs::path& dir, const ScenarioConfig& config,
                  const SimulationResult& result, const std::string& command) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create directory " + dir.string() +
                                 ": " + ec.message());
  }
  write_rounds_csv(dir / "rounds.csv", result);
  write_summary_csv(dir / "summary.csv", result);
  write_manifest(dir / "manifest.json", config, command);
}

void print_warnings(const ScenarioConfig& config) {
  for (const std::string& warning : validate_config(config)) {
    std::cerr << "warning: " << warning << '\n';
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> rounds;
  unsigned jobs = 0;
};

int cmd_simulate(const SimulateArgs& args) {
  ScenarioConfig config = load_config_file(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.runs) config.runs = *args.runs;
  if (args.rounds) config.rounds = *args.rounds;
  print_warnings(config);

  const SimulationResult result = run_parallel(config, args.jobs);
  write_bundle(args.out_dir, config, result, "simulate");

  std::cout << "runs = " << config.runs << ", rounds = " << config.rounds
            << ", seed = " << config.seed << '\n';
  std::cout << "mean accuracy = "
            << format_fixed(mean_aggregate_accuracy(result.summaries)) << '\n';
  std::cout << "wrote rounds.csv, summary.csv, manifest.json to "
            << args.out_dir << '\n';
  return kOk;
}

struct PresetArgs {
  std::string name;
  std::uint64_t seed = 42;
  std::string out_dir;
  std::optional<int> runs;
  std::optional<int> rounds;
  unsigned jobs = 0;
};

int cmd_preset_list() {
  for (const Preset& preset : preset_registry()) {
    std::printf("%-26s %s\n", preset.name.c_str(), preset.summary.c_str());
  }
  return kOk;
}

int cmd_preset_show(const std::string& name) {
  const Preset* preset = find_preset(name);
  if (preset == nullptr) {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  std::cout << config_to_json(preset->base_config()).dump(2) << '\n';
  return kOk;
}

int cmd_preset_run(const PresetArgs& args) {
  const Preset* preset = find_preset(args.name);
  if (preset == nullptr) {
    throw ConfigError("preset", "unknown preset '" + args.name + "'");
  }
  PresetOverrides overrides;
  overrides.runs = args.runs;
  overrides.rounds = args.rounds;
  const PresetReport report = preset->run(args.seed, overrides);
  const std::string text = render_report(report);
  std::cout << text;

  if (!args.out_dir.empty()) {
    // The CSV part of the bundle records the preset's reference scenario at
    // the requested seed; report.txt carries the full measurements.
    ScenarioConfig config = preset->base_config();
    config.seed = args.seed;
    if (args.runs) config.runs = *args.runs;
    if (args.rounds) config.rounds = *args.rounds;
    const SimulationResult result = run_parallel(config, args.jobs);
    write_bundle(args.out_dir, config, result, "preset " + preset->name);
    std::ofstream out(fs::path(args.out_dir) / "report.txt");
    if (!out) {
      throw std::ios_base::failure("cannot write " + args.out_dir +
                                   "/report.txt");
    }
    out << text;
  }
  return report.all_passed() ? kOk : kExpectationFailure;
}

int cmd_oracle_majority(int n, double p) {
  if (n < 1) throw ConfigError("oracle.n", "need at least one agent");
  if (p < 0.0 || p > 1.0) {
    throw ConfigError("oracle.p", "accuracy must lie in [0, 1]");
  }
  std::cout << format_fixed(analytic_majority_accuracy(n, p)) << '\n';
  return kOk;
}

int cmd_oracle_bounds(const std::string& accuracies) {
  std::vector<double> p = parse_double_list(accuracies, "oracle.accuracies");
  std::sort(p.begin(), p.end());
  const auto [lower, upper] = majority_accuracy_bounds(p);
  std::cout << format_fixed(lower) << ' ' << format_fixed(upper) << '\n';
  return kOk;
}

int cmd_oracle_enumerate(const std::string& accuracies,
                         const std::string& weights) {
  const std::vector<double> p =
      parse_double_list(accuracies, "oracle.accuracies");
  std::vector<double> w;
  if (weights.empty()) {
    w.assign(p.size(), 1.0);
  } else {
    w = parse_double_list(weights, "oracle.weights");
  }
  std::cout << format_fixed(enumerate_group_accuracy(p, w)) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective problem-solving simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a scenario from a config file and write a bundle");
  simulate->add_option("--config", sim.config_path, "scenario config (JSON)")
      ->required();
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim.seed, "override the config seed");
  simulate->add_option("--runs", sim.runs, "override the run count");
  simulate->add_option("--rounds", sim.rounds, "override the round count");
  simulate->add_option("--jobs", sim.jobs, "worker threads (0 = auto)");

  PresetArgs pre;
  CLI::App* preset = app.add_subcommand(
      "preset", "run a registered preset and check its expectations");
  preset->add_option("name", pre.name, "preset name (unique prefix ok)");
  preset->add_option("--seed", pre.seed, "base seed (default 42)");
  preset->add_option("--out", pre.out_dir, "also write a bundle here");
  preset->add_option("--runs", pre.runs, "override runs per batch");
  preset->add_option("--rounds", pre.rounds, "override rounds per run");
  preset->add_option("--jobs", pre.jobs, "worker threads for the bundle");
  CLI::App* preset_list =
      preset->add_subcommand("list", "list registered presets");
  std::string show_name;
  CLI::App* preset_show =
      preset->add_subcommand("show", "print a preset's canonical config");
  preset_show->add_option("name", show_name, "preset name")->required();

  CLI::App* oracle =
      app.add_subcommand("oracle", "closed-form and enumeration references");
  oracle->require_subcommand(1);
  int oracle_n = 0;
  double oracle_p = 0.0;
  CLI::App* majority = oracle->add_subcommand(
      "majority", "analytic majority accuracy for n equal agents");
  majority->add_option("--n", oracle_n, "group size")->required();
  majority->add_option("--p", oracle_p, "individual accuracy")->required();
  std::string bounds_accuracies;
  CLI::App* bounds = oracle->add_subcommand(
      "bounds", "majority accuracy bounds for unequal agents");
  bounds->add_option("--accuracies", bounds_accuracies, "comma-separated list")
      ->required();
  std::string enum_accuracies;
  std::string enum_weights;
  CLI::App* enumerate = oracle->add_subcommand(
      "enumerate", "exact weighted-vote accuracy by outcome enumeration");
  enumerate
      ->add_option("--accuracies", enum_accuracies, "comma-separated list")
      ->required();
  enumerate->add_option("--weights", enum_weights,
                        "comma-separated list (default: all 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigErrorCode;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (preset->parsed()) {
      if (preset_list->parsed()) return cmd_preset_list();
      if (preset_show->parsed()) return cmd_preset_show(show_name);
      if (pre.name.empty()) {
        throw ConfigError("preset", "expected a preset name or 'list'");
      }
      return cmd_preset_run(pre);
    }
    if (oracle->parsed()) {
      if (majority->parsed()) return cmd_oracle_majority(oracle_n, oracle_p);
      if (bounds->parsed()) return cmd_oracle_bounds(bounds_accuracies);
      return cmd_oracle_enumerate(enum_accuracies, enum_weights);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorCode;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoErrorCode;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoErrorCode;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorCode;
  } catch (const std::length_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorCode;
  }
  return kOk;
}
