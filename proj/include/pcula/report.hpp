#pragma once

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pcula {

using Json = nlohmann::ordered_json;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  // Cells are numbers or strings.
  std::vector<std::vector<Json>> rows;

  std::string to_csv() const;
};

/// Outcome of one experiment run. Everything except wall_seconds is a pure
/// function of the echoed parameters.
struct ExperimentReport {
  std::string name;
  Json parameters = Json::object();
  std::vector<ResultTable> tables;
  Json derived = Json::object();
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool passed() const;
  const ResultTable& table(const std::string& name) const;

  /// Stable-key-order JSON document; wall-clock time is left out so reruns
  /// are byte-identical.
  Json to_json(const std::string& config_echo = {}) const;
  std::string summary() const;

  /// File name -> contents for report.json and one CSV per table.
  std::vector<std::pair<std::string, std::string>> files(
      const std::string& config_echo = {}) const;
};

/// Writes every file to a temporary name first and renames them into place
/// only after all writes succeeded.
void write_outputs_atomic(const std::filesystem::path& dir,
                          const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace pcula
