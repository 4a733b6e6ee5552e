#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colsim/engine.hpp"

namespace colsim {

// A single checkable claim about a preset's measurements. Approx passes when
// |measured - target| <= tolerance, AtLeast when measured >= target, AtMost
// when measured <= target. `provenance` names the reproduced figure, table or
// section.
struct Expectation {
  enum class Kind { Approx, AtLeast, AtMost };

  std::string metric;
  Kind kind = Kind::Approx;
  double target = 0.0;
  double tolerance = 0.0;
  std::string provenance;

  bool check(double measured) const {
    switch (kind) {
      case Kind::Approx:
        return std::abs(measured - target) <= tolerance;
      case Kind::AtLeast:
        return measured >= target;
      case Kind::AtMost:
        return measured <= target;
    }
    return false;
  }
};

struct ExpectationResult {
  Expectation expectation;
  double measured = 0.0;
  bool passed = false;
};

// Free-form measurement rows for the report (label, value).
struct MetricRow {
  std::string label;
  double value = 0.0;
};

// Per-batch run summaries, for CSV emission by the CLI.
struct BatchSummaries {
  std::string label;
  std::vector<RunSummary> summaries;
};

struct PresetReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<MetricRow> metrics;
  std::vector<ExpectationResult> expectations;
  std::vector<BatchSummaries> batches;

  bool all_passed() const {
    for (const ExpectationResult& r : expectations) {
      if (!r.passed) return false;
    }
    return true;
  }
};

struct PresetOverrides {
  std::optional<int> runs;
  std::optional<int> rounds;
};

struct Preset {
  std::string name;
  std::string summary;
  std::function<ScenarioConfig()> base_config;
  std::vector<Expectation> expectations;
  std::function<PresetReport(std::uint64_t, const PresetOverrides&)> run;
};

// All registered presets, in a stable order.
const std::vector<Preset>& preset_registry();

std::vector<std::string> list_presets();

// Exact name match first, then a unique prefix; nullptr when nothing (or more
// than one preset) matches.
const Preset* find_preset(const std::string& name);

// Executes a preset. Throws ConfigError for unknown names.
PresetReport run_preset(const std::string& name, std::uint64_t seed,
                        const PresetOverrides& overrides = {});

// One measured point of a parameter sweep.
struct SweepPoint {
  double value = 0.0;
  std::vector<MetricRow> metrics;
  std::vector<RunSummary> summaries;
};

// Runs `base` once per value with the scalar at `json_pointer` (RFC 6901,
// e.g. "/decision_rule/chi") replaced by that value. Point k runs with seed
// `seed + k` so values use distinct but reproducible streams. Throws
// ConfigError for paths that do not resolve to a config scalar.
std::vector<SweepPoint> sweep(const ScenarioConfig& base,
                              const std::string& json_pointer,
                              std::span<const double> values,
                              std::uint64_t seed);

// Mean metrics across runs, used by presets and the sweep table.
double mean_aggregate_accuracy(const std::vector<RunSummary>& summaries);
double mean_approp_share(const std::vector<RunSummary>& summaries);
std::vector<double> mean_problem_accuracy(
    const std::vector<RunSummary>& summaries);
std::vector<double> mean_problem_agents(
    const std::vector<RunSummary>& summaries);

// report.txt layout used by the CLI for preset runs.
std::string render_report(const PresetReport& report);

}  // namespace colsim
