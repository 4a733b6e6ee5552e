#include "colsim/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "colsim/config_io.hpp"

namespace colsim {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
  return out;
}

}  // namespace

std::string format_fixed(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

void write_rounds_csv(const std::filesystem::path& path,
                      const SimulationResult& result) {
  std::ofstream out = open_for_write(path);
  out << "run,round,problem,n_j,group_correct,stimulus,psi_group\n";
  for (const RoundRecord& record : result.records) {
    for (std::size_t j = 0; j < record.problems.size(); ++j) {
      const ProblemRound& pr = record.problems[j];
      out << record.run << ',' << record.round << ',' << j << ','
          << pr.n_agents << ',' << pr.group_correct << ','
          << format_fixed(pr.stimulus) << ',' << format_fixed(pr.psi_group)
          << '\n';
    }
  }
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

void write_summary_csv(const std::filesystem::path& path,
                       const SimulationResult& result) {
  std::ofstream out = open_for_write(path);
  out << "run,problem,accuracy,mean_agents,approp_share\n";
  for (const RunSummary& summary : result.summaries) {
    for (std::size_t j = 0; j < summary.problem_accuracy.size(); ++j) {
      out << summary.run << ',' << j << ','
          << format_fixed(summary.problem_accuracy[j]) << ','
          << format_fixed(summary.mean_agents[j]) << ','
          << format_fixed(summary.problem_approp_share[j]) << '\n';
    }
    out << summary.run << ",aggregate,"
        << format_fixed(summary.aggregate_accuracy) << ','
        << format_fixed(summary.mean_assigned_total) << ','
        << format_fixed(summary.approp_share) << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& path,
                    const ScenarioConfig& config, const std::string& command) {
  nlohmann::json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["command"] = command;
  manifest["seed"] = config.seed;
  manifest["config"] = config_to_json(config);
  std::ofstream out = open_for_write(path);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

}  // namespace colsim
