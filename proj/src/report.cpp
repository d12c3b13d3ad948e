#include "pcula/report.hpp"

#include "pcula/errors.hpp"
#include "pcula/trajectory_io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace pcula {

namespace {

std::string cell_text(const Json& v) {
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << (i ? "," : "") << csv_field(columns[i]);
  os << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\r\n";
  }
  return os.str();
}

bool ExperimentReport::passed() const {
  auto it = derived.find("passed");
  return it != derived.end() && it->is_boolean() && it->get<bool>();
}

const ResultTable& ExperimentReport::table(const std::string& table_name) const {
  for (const auto& t : tables)
    if (t.name == table_name) return t;
  throw InvalidArgument("report has no table named " + table_name);
}

Json ExperimentReport::to_json(const std::string& config_echo) const {
  Json j;
  j["experiment"] = name;
  if (!config_echo.empty()) j["config"] = config_echo;
  j["parameters"] = parameters;
  j["derived"] = derived;
  j["passed"] = passed();
  j["warnings"] = warnings;
  Json tables_json = Json::array();
  for (const auto& t : tables) {
    Json tj;
    tj["name"] = t.name;
    tj["file"] = t.name + ".csv";
    tj["columns"] = t.columns;
    tj["rows"] = t.rows.size();
    tables_json.push_back(std::move(tj));
  }
  j["tables"] = std::move(tables_json);
  return j;
}

std::string ExperimentReport::summary() const {
  std::ostringstream os;
  os << name << ": " << (passed() ? "PASS" : "FAIL");
  for (auto it = derived.begin(); it != derived.end(); ++it) {
    if (it.key() == "passed") continue;
    if (it->is_primitive()) {
      os << "\n  " << it.key() << " = "
         << (it->is_number_float() ? format_double(it->get<double>()) : it->dump());
    } else if (it->is_array() && it->size() <= 16) {
      os << "\n  " << it.key() << " = " << it->dump();
    }
  }
  for (const auto& w : warnings) os << "\n  warning: " << w;
  os << "\n  wall time = " << wall_seconds << " s";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> ExperimentReport::files(
    const std::string& config_echo) const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("report.json", to_json(config_echo).dump(2) + "\n");
  for (const auto& t : tables) out.emplace_back(t.name + ".csv", t.to_csv());
  return out;
}

void write_outputs_atomic(const std::filesystem::path& dir,
                          const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string suffix = ".tmp." + std::to_string(::getpid());
  std::vector<fs::path> staged;
  try {
    for (const auto& [name, bytes] : files) {
      fs::path tmp = dir / (name + suffix);
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      staged.push_back(tmp);
      if (!f) throw Error("cannot open " + tmp.string() + " for writing");
      f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      f.flush();
      if (!f) throw Error("write failed for " + tmp.string());
    }
  } catch (...) {
    for (const auto& p : staged) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], dir / files[i].first);
}

}  // namespace pcula
