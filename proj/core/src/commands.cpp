#include "solenoid/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "solenoid/deviations.hpp"
#include "solenoid/errors.hpp"
#include "solenoid/geometry.hpp"
#include "solenoid/lamination.hpp"
#include "solenoid/thermo.hpp"
#include "solenoid/validation.hpp"

namespace solenoid {

namespace {

using nlohmann::json;

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

json flags_json(const RegimeFlags& f) {
  return {{"thin", f.thin},
          {"uniform_dissipation", f.uniform_dissipation},
          {"bunching", f.bunching},
          {"sup_lam", f.sup_lam},
          {"sup_eta", f.sup_eta},
          {"bunching_slack", f.bunching_slack}};
}

json validation_json(const ValidationReport& v) {
  json checks = json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst_value", c.worst_value},
                      {"witness", c.witness ? point_json(*c.witness) : json(nullptr)}});
  }
  return {{"ok", v.ok()}, {"grid_density", v.grid_density}, {"note", v.note}, {"checks", checks}};
}

json fit_json(const DimensionFit& f, int n) {
  json counts = json::array();
  for (const auto& [r, c] : f.counts) counts.push_back({r, c});
  return {{"n", n},        {"slope", f.slope},       {"r2", f.r2},
          {"scale_lo", f.scale_lo}, {"scale_hi", f.scale_hi}, {"fiber_corrected", f.fiber_corrected},
          {"counts", counts}};
}

json model_json(const GibbsModel& m) {
  return {{"n", m.n},
          {"t0", json::array({m.t0_lo, m.t0_hi})},
          {"t0_lo", m.t0_lo},
          {"t0_hi", m.t0_hi},
          {"t0_width", m.t0_hi - m.t0_lo},
          {"chi_eta", m.chi_eta},
          {"chi_lam", m.chi_lam},
          {"chi_nu", m.chi_nu},
          {"entropy", m.entropy}};
}

json transversality_json(const TransversalityResult& r, int n_past) {
  return {{"n_past", n_past},
          {"alpha0_est", std::isnan(r.alpha0_est) ? json(nullptr) : json(r.alpha0_est)},
          {"near_tangency_count", r.near_tangency_count},
          {"pairs", r.pairs},
          {"intersections", r.intersections}};
}

json holonomy_json(const HolonomyReport& h) {
  json scales = json::array();
  for (const auto& s : h.scales) {
    scales.push_back({{"shared", s.shared},
                      {"pairs", s.pairs},
                      {"min_ratio", s.min_ratio},
                      {"median_ratio", s.median_ratio},
                      {"max_ratio", s.max_ratio}});
  }
  return {{"n", h.n},
          {"x_src", h.x_src},
          {"x_dst", h.x_dst},
          {"scales", scales},
          {"min_ratio", h.min_ratio},
          {"max_ratio", h.max_ratio},
          {"words_tested", h.words_tested},
          {"indeterminate", h.indeterminate},
          {"flagged_weight", h.flagged_weight},
          {"strong_lipschitz_fraction", h.strong_lipschitz_fraction},
          {"flagged_words", h.flagged_words}};
}

json nl_json(const NlBound& b, int n) {
  return {{"n", n},
          {"t0", b.t0},
          {"bound", b.bound},
          {"best_eps", b.best_eps},
          {"a_eps", std::isfinite(b.a_eps) ? json(b.a_eps) : json(nullptr)},
          {"b_eps", b.b_eps},
          {"irregular_empty", b.irregular_empty}};
}

CsvTable nl_table(const NlBound& b, int n) {
  CsvTable t{"nl_bound", n, {"eps", "ratio", "feasible", "rate_lam", "rate_eta", "a_eps", "b_eps"}, {}};
  for (const auto& r : b.rows) {
    t.rows.push_back({cell(r.eps), cell(r.ratio), cell(r.feasible), cell(r.rate_lam), cell(r.rate_eta),
                      cell(r.a_eps), cell(r.b_eps)});
  }
  return t;
}

CsvTable holonomy_table(const HolonomyReport& h) {
  CsvTable t{"holonomy", h.n, {"shared", "pairs", "min_ratio", "median_ratio", "max_ratio"}, {}};
  for (const auto& s : h.scales) {
    t.rows.push_back({cell(s.shared), cell(s.pairs), cell(s.min_ratio), cell(s.median_ratio), cell(s.max_ratio)});
  }
  return t;
}

CsvTable counts_table(std::vector<std::pair<std::string, DimensionFit>> const& fits, int n) {
  CsvTable t{"box_counts", n, {"cloud", "r", "count"}, {}};
  for (const auto& [name, f] : fits)
    for (const auto& [r, c] : f.counts) t.rows.push_back({name, cell(r), cell(c)});
  return t;
}

CsvTable cloud_table(const PointCloud& cloud, const std::string& name) {
  CsvTable t{name, cloud.provenance.n, {}, {}};
  t.columns = cloud.dim == 3 ? std::vector<std::string>{"x", "y", "z"} : std::vector<std::string>{"y", "z"};
  t.rows.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::vector<std::string> row;
    for (double v : cloud.point(i)) row.push_back(cell(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string fiber_name(std::size_t i) { return "slice_" + std::to_string(i); }

class Runner {
 public:
  Runner(const RunConfig& cfg, Report& rep) : cfg_(cfg), rep_(rep), sol_(cfg.spec) {}

  template <class F>
  auto stage(const std::string& name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    auto out = body();
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
    rep_.timings_ms.emplace_back(name, dt.count());
    return out;
  }

  ParallelOptions par() const { return {cfg_.threads}; }
  std::uint64_t cap() const { return cfg_.knobs.enumeration_cap; }

  const GibbsModel& model() {
    if (!model_) {
      model_ = stage("gibbs_model", [&] {
        return build_gibbs_model(sol_, cfg_.depth_n, cfg_.knobs.bowen_tol, cap(), par());
      });
    }
    return *model_;
  }

  json validate() {
    CsvTable t{"validate", 0, {"hypothesis", "passed", "worst_value", "witness_x", "witness_y", "witness_z"}, {}};
    for (const auto& c : cfg_.validation.checks) {
      const Point3 w = c.witness.value_or(Point3{NAN, NAN, NAN});
      t.rows.push_back({c.name, cell(c.passed), cell(c.worst_value), cell(w.x), cell(w.y), cell(w.z)});
    }
    rep_.tables.push_back(std::move(t));
    json out = validation_json(cfg_.validation);
    if (cfg_.regime) out["flags"] = flags_json(*cfg_.regime);
    return out;
  }

  json pressure() {
    const auto table = stage("cylinder_table", [&] {
      return std::make_shared<const CylinderTable>(CylinderTable::build(sol_, cfg_.depth_n, cap(), par()));
    });
    const auto& k = cfg_.knobs;
    CsvTable t{"pressure", cfg_.depth_n, {"t", "p_lo", "p_hi"}, {}};
    json curve = json::array();
    for (int i = 0; i < k.t_points; ++i) {
      const double tv = k.t_min + (k.t_max - k.t_min) * i / (k.t_points - 1);
      const auto b = pressure_bracket(*table, tv);
      curve.push_back({{"t", tv}, {"p_lo", b.p_lo}, {"p_hi", b.p_hi}});
      t.rows.push_back({cell(tv), cell(b.p_lo), cell(b.p_hi)});
    }
    rep_.tables.push_back(std::move(t));
    return {{"n", cfg_.depth_n}, {"curve", curve}};
  }

  json bowen() {
    const auto& m = model();
    const auto flags = stage("regime", [&] { return classify_regime(sol_, m); });
    json out = model_json(m);
    out["flags"] = flags_json(flags);
    CsvTable t{"bowen", m.n, {"t", "p_lo", "p_hi"}, {}};
    const double lo = m.t0_lo - 0.05;
    const double hi = m.t0_hi + 0.05;
    for (int i = 0; i <= 20; ++i) {
      const double tv = lo + (hi - lo) * i / 20.0;
      const auto b = pressure_bracket(*m.table, tv);
      t.rows.push_back({cell(tv), cell(b.p_lo), cell(b.p_hi)});
    }
    rep_.tables.push_back(std::move(t));
    return out;
  }

  json dimension() {
    const auto& k = cfg_.knobs;
    std::vector<std::pair<std::string, DimensionFit>> fits;
    json slices = json::array();
    for (std::size_t i = 0; i < k.slice_fibers.size(); ++i) {
      const double x = k.slice_fibers[i];
      const auto cloud = stage(fiber_name(i), [&] { return slice_cloud(sol_, x, cfg_.depth_n, cap(), par()); });
      const auto fit = box_dimension(cloud, k.k_scales);
      const auto proj = box_dimension(project(cloud, 0), k.k_scales);
      slices.push_back({{"x", x}, {"fit", fit_json(fit, cfg_.depth_n)}, {"projection_y", fit_json(proj, cfg_.depth_n)}});
      fits.emplace_back(fiber_name(i), fit);
      fits.emplace_back(fiber_name(i) + "_y", proj);
      rep_.tables.push_back(cloud_table(cloud, fiber_name(i)));
    }
    const auto full = stage("attractor", [&] {
      return box_dimension(attractor_cloud(sol_, k.full_depth, cfg_.fibers, cap(), par()), k.k_scales);
    });
    fits.emplace_back("attractor", full);
    const auto overlap = stage("overlap", [&] {
      return overlap_multiplicity(sol_, k.overlap_depth, k.overlap_fibers, cap(), par());
    });
    rep_.tables.push_back(counts_table(fits, cfg_.depth_n));

    const auto& m = model();
    std::vector<double> radii;
    const double lam = sol_.bounds().lam_sup;
    for (int e = 3; e <= std::min(8, m.n); ++e) radii.push_back(std::pow(lam, e));
    json density = json::array();
    CsvTable dt{"density", m.n, {"x", "radius", "min_ratio", "median_ratio", "max_ratio"}, {}};
    for (double x : radii.empty() ? std::vector<double>{} : k.slice_fibers) {
      const auto d = stage("density", [&] { return local_density_stats(sol_, m, x, radii, 200, cfg_.seed, par()); });
      json rows = json::array();
      for (const auto& r : d.rows) {
        rows.push_back({{"radius", r.radius}, {"min", r.min_ratio}, {"median", r.median_ratio}, {"max", r.max_ratio}});
        dt.rows.push_back({cell(x), cell(r.radius), cell(r.min_ratio), cell(r.median_ratio), cell(r.max_ratio)});
      }
      density.push_back({{"x", d.x},
                         {"n", d.n},
                         {"samples", d.samples},
                         {"rows", rows},
                         {"packing_fraction", d.packing_fraction},
                         {"overlap_fraction", d.overlap_fraction}});
    }
    rep_.tables.push_back(std::move(dt));
    json hist = json::array();
    for (auto c : overlap.order_histogram) hist.push_back(c);
    return {{"t0_lo", m.t0_lo},
            {"t0_hi", m.t0_hi},
            {"predicted_slice", m.t0_mid()},
            {"predicted_full", 1.0 + m.t0_mid()},
            {"predicted_projection", std::min(m.t0_mid(), 1.0)},
            {"slices", slices},
            {"full", fit_json(full, k.full_depth)},
            {"full_fibers", cfg_.fibers},
            {"density", density},
            {"overlap",
             {{"n", overlap.n},
              {"x_samples", overlap.x_samples},
              {"order_histogram", hist},
              {"max_order", overlap.max_order},
              {"max_touch_fibers", overlap.max_touch_fibers},
              {"max_touch_cells", overlap.max_touch_cells},
              {"h_n", overlap.h_n},
              {"h_n_limit", (m.t0_mid() + 0.1) * std::log(2.0)}}}};
  }

  TransversalityResult transversal() {
    const auto& k = cfg_.knobs;
    TransversalityOptions opts;
    opts.leaf_samples = k.leaf_samples;
    opts.seed = cfg_.seed;
    return stage("transversality", [&] { return min_transversal_angle(sol_, k.n_past, k.pair_budget, opts, par()); });
  }

  json transversality() {
    const auto r = transversal();
    CsvTable t{"transversality", cfg_.knobs.n_past, {"alpha0_est", "near_tangency_count", "pairs", "intersections"}, {}};
    t.rows.push_back({cell(r.alpha0_est), cell(r.near_tangency_count), cell(r.pairs), cell(r.intersections)});
    rep_.tables.push_back(std::move(t));
    return transversality_json(r, cfg_.knobs.n_past);
  }

  HolonomyReport scan() {
    const auto& k = cfg_.knobs;
    const auto hm = stage("holonomy_model", [&] {
      return build_gibbs_model(sol_, k.holonomy_depth, k.bowen_tol, cap(), par());
    });
    HolonomyScanOptions opts;
    opts.pairs = k.holonomy_pairs;
    opts.seed = cfg_.seed;
    opts.strong.L = k.lipschitz_L;
    opts.strong.search_factor = k.search_factor;
    return stage("holonomy", [&] { return holonomy_lipschitz_scan(sol_, hm, k.x_src, k.x_dst, opts, par()); });
  }

  json holonomy() {
    const auto h = scan();
    rep_.tables.push_back(holonomy_table(h));
    return holonomy_json(h);
  }

  json deviations() {
    const auto& k = cfg_.knobs;
    const auto& m = model();
    const auto& table = *m.table;
    const double t0 = m.t0_hi;
    json rates = json::array();
    CsvTable rt{"rate_function", m.n, {"observable", "t_aux", "eps", "rate", "degenerate"}, {}};
    for (auto [obs, name] : {std::pair{Observable::log_lam, "log_lam"}, std::pair{Observable::neg_log_eta, "neg_log_eta"}}) {
      for (int i = 0; i < k.t_points; ++i) {
        const double ta = -2.0 + 4.0 * i / (k.t_points - 1);
        const auto r = rate_function(table, t0, obs, ta);
        rt.rows.push_back({name, cell(r.t_aux), cell(r.eps), cell(r.rate), cell(r.degenerate)});
      }
      rates.push_back({{"observable", name},
                       {"degenerate", is_degenerate(table, obs)},
                       {"two_sided_rate_at_ld_eps", two_sided_rate(table, t0, obs, k.ld_eps)}});
    }
    const auto nl = stage("nl_bound", [&] { return nl_dimension_bound(m, cfg_.eps_grid); });
    const auto decay = stage("deviation_decay", [&] {
      return deviation_decay(sol_, k.ld_n_min, k.ld_n_max, k.ld_eps, cap(), par());
    });
    CsvTable dt{"deviation_decay", k.ld_n_max, {"n", "fraction"}, {}};
    for (std::size_t i = 0; i < decay.generations.size(); ++i)
      dt.rows.push_back({cell(decay.generations[i]), cell(decay.fractions[i])});
    rep_.tables.push_back(std::move(rt));
    rep_.tables.push_back(nl_table(nl, m.n));
    rep_.tables.push_back(std::move(dt));
    return {{"n", m.n},
            {"t0", t0},
            {"rates", rates},
            {"nl_bound", nl_json(nl, m.n)},
            {"decay",
             {{"eps", decay.eps},
              {"chi_ref", decay.chi_ref},
              {"n_range", json::array({k.ld_n_min, k.ld_n_max})},
              {"tau_emp", decay.tau_emp},
              {"tau_pred", decay.tau_pred}}}};
  }

  json report() {
    const json b = bowen();
    const json dim = dimension();
    const auto tr = transversal();
    const auto hol = scan();
    const auto nl = stage("nl_bound", [&] { return nl_dimension_bound(model(), cfg_.eps_grid); });
    rep_.tables.push_back(holonomy_table(hol));
    rep_.tables.push_back(nl_table(nl, model().n));

    double slice_sum = 0.0;
    for (const auto& s : dim["slices"]) slice_sum += s["fit"]["slope"].get<double>();
    const double slice_dim = dim["slices"].empty() ? NAN : slice_sum / dim["slices"].size();
    const auto& m = model();
    return {{"n", m.n},
            {"t0_lo", m.t0_lo},
            {"t0_hi", m.t0_hi},
            {"slice_dim", slice_dim},
            {"full_dim", dim["full"]["slope"]},
            {"predicted_slice_dim", m.t0_mid()},
            {"predicted_full_dim", 1.0 + m.t0_mid()},
            {"alpha0_est", std::isnan(tr.alpha0_est) ? json(nullptr) : json(tr.alpha0_est)},
            {"bound_NL", nl.bound},
            {"bowen", b},
            {"dimension", dim},
            {"transversality", transversality_json(tr, cfg_.knobs.n_past)},
            {"holonomy", holonomy_json(hol)},
            {"nl_bound", nl_json(nl, m.n)}};
  }

 private:
  const RunConfig& cfg_;
  Report& rep_;
  Solenoid sol_;
  std::optional<GibbsModel> model_;
};

}  // namespace

bool is_command(std::string_view name) {
  for (auto c : kCommands)
    if (c == name) return true;
  return false;
}

json Report::to_json(bool with_timings) const {
  json j{{"command", command}, {"spec_hash", spec_hash}, {"inputs", inputs}, {"results", results}};
  if (with_timings) {
    json t = json::object();
    for (const auto& [name, ms] : timings_ms) t[name] = ms;
    j["timings_ms"] = t;
  }
  return j;
}

std::string csv_help() {
  return "CSV outputs (first line '# spec_hash=<hash> n=<generation>'):\n"
         "  validate        validate.csv: hypothesis,passed,worst_value,witness_x,witness_y,witness_z\n"
         "  pressure        pressure.csv: t,p_lo,p_hi\n"
         "  bowen           bowen.csv: t,p_lo,p_hi (around the root)\n"
         "  dimension       slice_<i>.csv: y,z; box_counts.csv: cloud,r,count;\n"
         "                  density.csv: x,radius,min_ratio,median_ratio,max_ratio\n"
         "  transversality  transversality.csv: alpha0_est,near_tangency_count,pairs,intersections\n"
         "  holonomy        holonomy.csv: shared,pairs,min_ratio,median_ratio,max_ratio\n"
         "  deviations      rate_function.csv: observable,t_aux,eps,rate,degenerate;\n"
         "                  nl_bound.csv: eps,ratio,feasible,rate_lam,rate_eta,a_eps,b_eps;\n"
         "                  deviation_decay.csv: n,fraction\n"
         "  report          all of bowen, dimension, holonomy and nl_bound tables\n";
}

Report run_command(const RunConfig& cfg, std::string_view command) {
  if (!is_command(command)) throw PreconditionError("unknown command \"" + std::string(command) + "\"");
  Report rep;
  rep.command = std::string(command);
  rep.spec_hash = spec_hash(cfg.spec);
  rep.inputs = config_to_json(cfg);

  const std::string ctx = rep.command + ": ";
  try {
    Runner run(cfg, rep);
    if (command == "validate") rep.results = run.validate();
    else if (command == "pressure") rep.results = run.pressure();
    else if (command == "bowen") rep.results = run.bowen();
    else if (command == "dimension") rep.results = run.dimension();
    else if (command == "transversality") rep.results = run.transversality();
    else if (command == "holonomy") rep.results = run.holonomy();
    else if (command == "deviations") rep.results = run.deviations();
    else rep.results = run.report();
  } catch (const SpecInvalid& e) {
    throw SpecInvalid(e.hypothesis(), ctx + e.what());
  } catch (const CapExceeded& e) {
    throw CapExceeded(ctx + e.what());
  } catch (const WordTooShort& e) {
    throw WordTooShort(ctx + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(ctx + e.what());
  } catch (const ParseError& e) {
    throw ParseError(ctx + e.what());
  } catch (const Error& e) {
    throw Error(ctx + e.what());
  }
  return rep;
}

std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir,
                                                bool with_timings) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    written.push_back(p);
    return out;
  };
  {
    auto out = open(dir / (report.command + ".json"));
    out << report.to_json(with_timings).dump(2) << '\n';
  }
  for (const auto& t : report.tables) {
    auto out = open(dir / (t.name + ".csv"));
    out << "# spec_hash=" << report.spec_hash << " n=" << t.n << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
  }
  return written;
}

}  // namespace solenoid
