#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solenoid/solenoid_map.hpp"
#include "solenoid/thermo.hpp"
#include "solenoid/validation.hpp"

namespace solenoid {

// Spec <-> JSON with the exact field names; every field is required and
// unknown fields are rejected (ParseError naming the field).
nlohmann::json spec_to_json(const SolenoidSpec& spec);
SolenoidSpec spec_from_json(const nlohmann::json& j);

// FNV-1a 64 of the canonical (sorted-key) spec dump, as 16 hex digits.
std::string spec_hash(const SolenoidSpec& spec);

// Command-specific knobs. JSON names match the member names.
struct Knobs {
  int grid_density = 16;
  double bowen_tol = 1e-6;
  // pressure curve
  double t_min = 0.0;
  double t_max = 2.0;
  int t_points = 21;
  // dimension
  int k_scales = 5;
  std::vector<double> slice_fibers{0.0, 1.5707963267948966};
  int full_depth = 12;
  // transversality
  int n_past = 8;
  int pair_budget = 500;
  int leaf_samples = 512;
  // holonomy
  int holonomy_depth = 8;
  int holonomy_pairs = 200;
  double x_src = 0.0;
  double x_dst = 3.141592653589793;
  double lipschitz_L = 1.0;
  double search_factor = 4.0;
  // deviations
  int ld_n_min = 6;
  int ld_n_max = 14;
  double ld_eps = 0.05;
  // overlap
  int overlap_depth = 12;
  int overlap_fibers = 256;
  std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
};

struct RunConfig {
  SolenoidSpec spec;
  int depth_n = 12;
  int fibers = 256;
  std::uint64_t seed = 1;
  std::vector<double> eps_grid;
  std::filesystem::path output_dir = "solenoid_out";
  unsigned threads = 0;
  Knobs knobs;

  ValidationReport validation;
  std::optional<RegimeFlags> regime;
};

// Parses and validates. Throws ParseError (with line or field) or
// SpecInvalid (naming the failed hypothesis).
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& j);

// Echo of every input with defaults filled.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace solenoid
