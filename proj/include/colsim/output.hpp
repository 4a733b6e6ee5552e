#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "colsim/engine.hpp"

namespace colsim {

inline constexpr const char* kToolName = "colsim";
inline constexpr const char* kToolVersion = "0.1.0";

// Fixed CSV column layouts; floats use 6 decimal places, undefined shares
// print as "nan".
//   rounds.csv:  run,round,problem,n_j,group_correct,stimulus,psi_group
//                (one row per run, round and problem)
//   summary.csv: run,problem,accuracy,mean_agents,approp_share
//                (per-problem rows plus one "aggregate" row per run)
void write_rounds_csv(const std::filesystem::path& path,
                      const SimulationResult& result);
void write_summary_csv(const std::filesystem::path& path,
                       const SimulationResult& result);

// Config echo plus seed and tool version; feeding the file back to the
// simulate command reproduces the bundle byte for byte.
void write_manifest(const std::filesystem::path& path,
                    const ScenarioConfig& config, const std::string& command);

std::string format_fixed(double value);  // 6 decimals, "nan" for NaN

}  // namespace colsim
