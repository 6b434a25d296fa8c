#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "solenoid/config.hpp"

namespace solenoid {

inline constexpr std::string_view kCommands[] = {"validate",       "pressure", "bowen",      "dimension",
                                                 "transversality", "holonomy", "deviations", "report"};

bool is_command(std::string_view name);

// One CSV artifact; cells are preformatted so output bytes are fixed.
struct CsvTable {
  std::string name;  // file stem, e.g. "pressure"
  int n = 0;         // generation the rows belong to
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  std::string spec_hash;
  nlohmann::json inputs;
  nlohmann::json results;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<CsvTable> tables;

  // Timings vary between runs, so they are only serialized on request.
  nlohmann::json to_json(bool with_timings = false) const;
};

// Column documentation for --help.
std::string csv_help();

Report run_command(const RunConfig& cfg, std::string_view command);

// Writes <command>.json and every CSV table under cfg.output_dir. Returns
// the paths written.
std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir,
                                                bool with_timings = false);

}  // namespace solenoid
