#pragma once

#include "pcula/config.hpp"
#include "pcula/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace pcula {

/// Environment variable that overrides the configured output directory
/// (the --out flag still wins).
inline constexpr const char* kOutDirEnv = "PCULA_OUT_DIR";

struct CliOptions {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed_override;
  bool strict = false;
  bool quiet = false;
  unsigned threads = 0;
};

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Config after command-line overrides; throws ConfigError when invalid.
RunConfig effective_config(const RunConfig& parsed, const CliOptions& opt);

/// Runs the configured command and returns the report plus every output file.
struct RunOutput {
  ExperimentReport report;
  std::vector<std::pair<std::string, std::string>> files;
};
RunOutput execute(const RunConfig& cfg, unsigned threads = 0);

/// Text echoed into report.json; parses back to cfg minus the output directory.
std::string config_echo(const RunConfig& cfg);

std::filesystem::path resolve_output_directory(const RunConfig& cfg, const CliOptions& opt);

int run_cli(const CliOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace pcula
