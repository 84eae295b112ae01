#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zakbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

struct ExperimentConfig {
  std::string command;  // expsys-sweep | zak-validate | quotient-ladder | rp-check | excess-n
  std::map<std::string, std::string> params;
  std::filesystem::path output_path = "reports";
  std::uint64_t seed = 0;
  bool write_csv = false;
  unsigned threads = 1;
};

// Names of the five experiment commands.
const std::vector<std::string>& commands();

// Parses argv into a config; returns nullopt and sets exit_code when the
// invocation is complete already (help) or invalid.
std::optional<ExperimentConfig> parse_args(int argc, const char* const* argv, int& exit_code,
                                           std::ostream& out, std::ostream& err);

// Validates the config, runs the experiment and writes
//   <out>/<command>.json       report (deterministic for a given config)
//   <out>/<command>.meta.json  run metadata (timestamp, threads)
//   <out>/<command>.csv        level,value,flag rows when write_csv is set
// Returns kExitOk, kExitAssertion or kExitUsage.
int run(const ExperimentConfig& config, std::ostream& log);

// ZAKBENCH_THREADS, clamped to [1, hardware_concurrency]; 1 when unset.
unsigned thread_limit_from_env();

}  // namespace zakbench::cli
