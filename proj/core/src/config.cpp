#include "solenoid/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "solenoid/deviations.hpp"
#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

using nlohmann::json;

template <class K, class F>
void visit_knobs(K& k, F&& f) {
  f("grid_density", k.grid_density);
  f("bowen_tol", k.bowen_tol);
  f("t_min", k.t_min);
  f("t_max", k.t_max);
  f("t_points", k.t_points);
  f("k_scales", k.k_scales);
  f("slice_fibers", k.slice_fibers);
  f("full_depth", k.full_depth);
  f("n_past", k.n_past);
  f("pair_budget", k.pair_budget);
  f("leaf_samples", k.leaf_samples);
  f("holonomy_depth", k.holonomy_depth);
  f("holonomy_pairs", k.holonomy_pairs);
  f("x_src", k.x_src);
  f("x_dst", k.x_dst);
  f("lipschitz_L", k.lipschitz_L);
  f("search_factor", k.search_factor);
  f("ld_n_min", k.ld_n_min);
  f("ld_n_max", k.ld_n_max);
  f("ld_eps", k.ld_eps);
  f("overlap_depth", k.overlap_depth);
  f("overlap_fibers", k.overlap_fibers);
  f("enumeration_cap", k.enumeration_cap);
}

template <class T>
void read_field(const json& j, const std::string& where, const std::string& key, T& dst) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  auto bad = [&] { return ParseError(where + ": field \"" + key + "\" has the wrong type"); };
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw bad();
    if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned() && it->get<std::int64_t>() < 0) {
        throw ParseError(where + ": field \"" + key + "\" must be non-negative");
      }
    }
    dst = it->get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw bad();
    dst = it->get<T>();
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!it->is_array()) throw bad();
    dst.clear();
    for (const auto& v : *it) {
      if (!v.is_number()) throw bad();
      dst.push_back(v.get<double>());
    }
  } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
    if (!it->is_string()) throw bad();
    dst = it->get<std::string>();
  } else {
    static_assert(sizeof(T) == 0, "unsupported field type");
  }
}

void reject_unknown(const json& j, const std::string& where, const std::vector<std::string>& known) {
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError(where + ": unknown field \"" + key + "\"");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParseError(message);
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  reject_unknown(j, "config", {"spec", "depth_n", "fibers", "seed", "eps_grid", "output_dir", "threads", "knobs"});
  const auto spec = j.find("spec");
  if (spec == j.end()) throw ParseError("config: missing field \"spec\"");

  RunConfig cfg;
  cfg.spec = spec_from_json(*spec);
  read_field(j, "config", "depth_n", cfg.depth_n);
  read_field(j, "config", "fibers", cfg.fibers);
  read_field(j, "config", "seed", cfg.seed);
  read_field(j, "config", "eps_grid", cfg.eps_grid);
  read_field(j, "config", "output_dir", cfg.output_dir);
  read_field(j, "config", "threads", cfg.threads);
  if (const auto k = j.find("knobs"); k != j.end()) {
    if (!k->is_object()) throw ParseError("knobs: expected a JSON object");
    std::vector<std::string> known;
    visit_knobs(cfg.knobs, [&](const char* name, auto&) { known.emplace_back(name); });
    reject_unknown(*k, "knobs", known);
    visit_knobs(cfg.knobs, [&](const char* name, auto& dst) { read_field(*k, "knobs", name, dst); });
  }
  if (cfg.eps_grid.empty()) cfg.eps_grid = default_eps_grid();

  const auto& kn = cfg.knobs;
  require(cfg.depth_n >= 1, "config: depth_n must be at least 1");
  require(cfg.fibers >= 1, "config: fibers must be at least 1");
  for (double e : cfg.eps_grid) require(e > 0.0, "config: eps_grid values must be positive");
  require(kn.grid_density >= 16, "knobs: grid_density must be at least 16");
  require(kn.bowen_tol > 0.0, "knobs: bowen_tol must be positive");
  require(kn.t_points >= 2 && kn.t_max > kn.t_min, "knobs: need t_points >= 2 and t_max > t_min");
  require(kn.k_scales >= 5, "knobs: k_scales must be at least 5");
  require(kn.full_depth >= 1, "knobs: full_depth must be at least 1");
  require(kn.n_past >= 1 && kn.pair_budget >= 1 && kn.leaf_samples >= 2, "knobs: transversality knobs out of range");
  require(kn.holonomy_depth >= 1 && kn.holonomy_pairs >= 1, "knobs: holonomy knobs out of range");
  require(kn.lipschitz_L > 0.0 && kn.search_factor >= kn.lipschitz_L, "knobs: need 0 < lipschitz_L <= search_factor");
  require(kn.ld_n_min >= 1 && kn.ld_n_max > kn.ld_n_min && kn.ld_eps > 0.0, "knobs: deviation knobs out of range");
  require(kn.overlap_depth >= 1 && kn.overlap_fibers >= 1, "knobs: overlap knobs out of range");

  cfg.validation = validate_spec(cfg.spec, kn.grid_density);
  require_valid(cfg.validation);
  const Solenoid sol(cfg.spec);
  const auto model =
      build_gibbs_model(sol, std::min(cfg.depth_n, 10), kn.bowen_tol, kn.enumeration_cap, {cfg.threads});
  cfg.regime = classify_regime(sol, model);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json config_to_json(const RunConfig& cfg) {
  json knobs = json::object();
  visit_knobs(cfg.knobs, [&](const char* name, const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::filesystem::path>) knobs[name] = v.string();
    else knobs[name] = v;
  });
  return json{{"spec", spec_to_json(cfg.spec)},
              {"depth_n", cfg.depth_n},
              {"fibers", cfg.fibers},
              {"seed", cfg.seed},
              {"eps_grid", cfg.eps_grid},
              {"output_dir", cfg.output_dir.string()},
              {"threads", cfg.threads},
              {"knobs", knobs}};
}

}  // namespace solenoid
