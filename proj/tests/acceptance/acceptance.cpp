// Runs every acceptance criterion and prints one PASS/FAIL line per item.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "solenoid/coding.hpp"
#include "solenoid/commands.hpp"
#include "solenoid/config.hpp"
#include "solenoid/deviations.hpp"
#include "solenoid/geometry.hpp"
#include "solenoid/lamination.hpp"
#include "solenoid/sampling.hpp"
#include "solenoid/thermo.hpp"
#include "support.hpp"

using namespace solenoid;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

const double kRootA = std::log(2.0) / std::log(2.5);

// Collects the facts a criterion checked; the criterion passes when all hold.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    notes_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

template <class F>
double timed(F&& f) {
  const auto t = std::chrono::steady_clock::now();
  f();
  return seconds_since(t);
}

void bowen_closed_form(Check& c) {
  BowenInterval a;
  const double secs = timed([&] { a = solve_bowen(Solenoid(bench_a()), 8, 1e-6); });
  c.require(a.t0_lo <= kRootA && kRootA <= a.t0_hi, fmt("A: [%.9f, %.9f] contains %.9f", a.t0_lo, a.t0_hi, kRootA));
  c.require(a.width() <= 1e-5, fmt("A: width %.3g <= 1e-5", a.width()));
  c.require(secs < 1.0, fmt("A: %.3f s < 1 s", secs));
  const auto d3 = solve_bowen(Solenoid(bench_d3()), 8, 1e-6);
  c.require(d3.t0_lo <= 0.5 + 1e-6 && d3.t0_hi >= 0.5 - 1e-6 && d3.width() <= 2e-6,
            fmt("d=3: [%.9f, %.9f] pins 0.5", d3.t0_lo, d3.t0_hi));
}

void pressure_anchors(Check& c) {
  double worst_zero = 0.0;
  bool decreasing = true;
  double worst_nest = 0.0;
  for (const auto& spec : {bench_a(), bench_b(), bench_c(), bench_d3()}) {
    const Solenoid sol(spec);
    const auto t6 = CylinderTable::build(sol, 6);
    const auto t12 = CylinderTable::build(sol, 12);
    const auto t3 = CylinderTable::build(sol, 3);
    const auto b0 = pressure_bracket(t6, 0.0);
    worst_zero = std::max({worst_zero, std::abs(b0.p_lo - std::log(spec.d)), std::abs(b0.p_hi - std::log(spec.d))});
    auto prev = b0;
    for (int i = 1; i < 20; ++i) {
      const double t = 2.0 * i / 19.0;
      const auto b = pressure_bracket(t6, t);
      decreasing = decreasing && b.p_lo < prev.p_lo && b.p_hi < prev.p_hi;
      prev = b;
      for (const auto* pair : {&t3, &t6}) {
        const auto& big = pair == &t3 ? t6 : t12;
        const auto s = pressure_bracket(*pair, t);
        const auto l = pressure_bracket(big, t);
        worst_nest = std::max({worst_nest, l.p_hi - s.p_hi, s.p_lo - l.p_lo});
      }
    }
  }
  c.require(worst_zero <= 1e-9, fmt("|P(0) - log d| max %.3g <= 1e-9", worst_zero));
  c.require(decreasing, "strictly decreasing on 20-point grid, all benchmarks");
  c.require(worst_nest <= 1e-9, fmt("nesting n->2n worst violation %.3g <= 1e-9", worst_nest));
}

struct SliceData {
  std::vector<PointCloud> clouds;
  std::vector<double> secs;
};

SliceData& slices_a() {
  static SliceData data = [] {
    SliceData d;
    const Solenoid sol(bench_a());
    for (double x : {0.0, std::numbers::pi / 2}) {
      const auto t = std::chrono::steady_clock::now();
      d.clouds.push_back(slice_cloud(sol, x, 16));
      d.secs.push_back(seconds_since(t));
    }
    return d;
  }();
  return data;
}

void slice_dimension(Check& c) {
  auto& data = slices_a();
  for (std::size_t i = 0; i < data.clouds.size(); ++i) {
    DimensionFit f;
    const double fit_secs = timed([&] { f = box_dimension(data.clouds[i], 5); });
    const double x = *data.clouds[i].provenance.fiber;
    c.require(std::abs(f.slope - 0.7565) <= 0.10, fmt("x=%.4f: slope %.4f within 0.10 of 0.7565", x, f.slope));
    c.require(f.r2 >= 0.99, fmt("x=%.4f: r2 %.5f >= 0.99", x, f.r2));
    c.require(data.secs[i] + fit_secs < 60.0, fmt("x=%.4f: %.2f s < 60 s", x, data.secs[i] + fit_secs));
  }
}

void full_dimension(Check& c) {
  DimensionFit f;
  const double secs = timed([&] { f = box_dimension(attractor_cloud(Solenoid(bench_a()), 12, 256), 5); });
  c.require(std::abs(f.slope - 1.7565) <= 0.15, fmt("slope %.4f within 0.15 of 1.7565 (r2 %.5f)", f.slope, f.r2));
  c.require(secs < 120.0, fmt("%.2f s < 120 s", secs));
}

void projection_dimension(Check& c) {
  for (const auto& cloud : slices_a().clouds) {
    const auto f = box_dimension(project(cloud, 0), 5);
    c.require(std::abs(f.slope - std::min(kRootA, 1.0)) <= 0.10,
              fmt("x=%.4f: y-projection slope %.4f within 0.10 of 0.7565", *cloud.provenance.fiber, f.slope));
  }
}

void exponents(Check& c) {
  const auto m = build_gibbs_model(Solenoid(bench_a()), 12);
  c.require(std::abs(m.chi_lam + 0.916291) <= 1e-6 && std::abs(m.chi_lam - std::log(0.4)) <= 1e-9,
            fmt("chi_lam %.9f", m.chi_lam));
  c.require(std::abs(m.chi_nu + 1.386294) <= 1e-6 && std::abs(m.chi_nu - std::log(0.25)) <= 1e-9,
            fmt("chi_nu %.9f", m.chi_nu));
  c.require(std::abs(m.chi_eta - 0.693147) <= 1e-6 && std::abs(m.chi_eta - std::log(2.0)) <= 1e-9,
            fmt("chi_eta %.9f", m.chi_eta));
  c.require(std::abs(m.entropy - std::log(2.0)) <= 0.02, fmt("entropy %.6f within 0.02 of log 2", m.entropy));
  const double gap = std::abs(m.entropy - m.t0_mid() * -m.chi_lam);
  c.require(gap <= 0.02, fmt("|h - t0 (-chi_lam)| = %.3g <= 0.02", gap));
}

void regime_flags(Check& c) {
  auto flags = [](const SolenoidSpec& s) {
    const Solenoid sol(s);
    return classify_regime(sol, build_gibbs_model(sol, 10));
  };
  const auto a = flags(bench_a()), b = flags(bench_b()), cc = flags(bench_c());
  // hand arithmetic: A  ν′ < λ′ < 1/2, 0.4 * 2 < 1, 2 * 0.25 > 0.4
  //                  B  2 * 0.05 = 0.1 < 0.4
  //                  C  sup λ′ sup η′ = 0.4 * 2.3 = 0.92 < 1
  c.require(a.thin && a.uniform_dissipation && a.bunching, "A: (thin, uniform, bunching) = (1, 1, 1)");
  c.require(!b.bunching && b.thin && b.uniform_dissipation, "B: bunching = 0, thin and uniform hold");
  c.require(cc.uniform_dissipation && std::abs(cc.sup_lam * cc.sup_eta - 0.92) <= 1e-12,
            fmt("C: uniform_dissipation with sup product %.6f", cc.sup_lam * cc.sup_eta));
}

double dist3(const Point3& a, const Point3& b) { return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z); }

void holonomy_laws(Check& c) {
  for (const auto& [name, spec] : {std::pair{"A", bench_a()}, std::pair{"B", bench_b()}, std::pair{"C", bench_c()}}) {
    const Solenoid sol(spec);
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      std::vector<Symbol> past(48);
      for (auto& s : past) s = static_cast<Symbol>(rng() % 2);
      const double x1 = kTwoPi * uniform01(rng), x2 = kTwoPi * uniform01(rng), x3 = kTwoPi * uniform01(rng);
      const auto [p, id] = holonomy_map(sol, past, x1, x1);
      const auto [a1, b1] = holonomy_map(sol, past, x1, x2);
      const auto [a2, b2] = holonomy_map(sol, past, x2, x3);
      const auto [a3, b3] = holonomy_map(sol, past, x1, x3);
      // a full turn of the base is the same leaf read with a carried past
      const auto [a4, b4] = holonomy_map(sol, past, x1, x1 + kTwoPi);
      const auto turned = leaf_point(sol, rebase_past(past, 1, 2), x1).point;
      worst = std::max({worst, dist3(p, id), dist3(b1, a2), dist3(b2, b3), dist3(p, a3), dist3(b4, turned),
                        std::abs(a4.x - b4.x)});
    }
    c.require(worst <= 1e-8, std::string(name) + fmt(": worst identity/composition defect %.3g <= 1e-8", worst));
  }
}

void bunched_stability(Check& c) {
  HolonomyScanOptions opts;
  opts.pairs = 200;
  auto scan = [&](const SolenoidSpec& s, int n) {
    const Solenoid sol(s);
    return holonomy_lipschitz_scan(sol, build_gibbs_model(sol, n), 0.0, std::numbers::pi, opts);
  };
  const auto a8 = scan(bench_a(), 8), a14 = scan(bench_a(), 14);
  c.require(a14.max_ratio <= 2.0 * a8.max_ratio,
            fmt("A: max ratio %.4f (n=14) <= 2 * %.4f (n=8)", a14.max_ratio, a8.max_ratio));
  const auto b8 = scan(bench_b(), 8), b14 = scan(bench_b(), 14);
  c.require(b14.flagged_weight <= 0.5 * b8.flagged_weight,
            fmt("B: flagged weight %.4f (n=14) <= half of %.4f (n=8)", b14.flagged_weight, b8.flagged_weight));
}

void transversality(Check& c) {
  const auto a = min_transversal_angle(Solenoid(bench_a()), 8, 500);
  c.require(a.alpha0_est > 0.01, fmt("A: alpha0_est %.4f rad > 0.01 over %.0f crossings", a.alpha0_est, a.intersections));
  c.require(a.near_tangency_count == 0, fmt("A: %.0f near-tangencies", a.near_tangency_count));
  const auto flat = min_transversal_angle(Solenoid(flat_u()), 8, 500);
  c.require(flat.near_tangency_count > 0, fmt("u_amp=0: %.0f near-tangencies > 0", flat.near_tangency_count));
}

void large_deviations(Check& c) {
  const auto d = deviation_decay(Solenoid(bench_c()), 6, 14, 0.05);
  c.require(d.tau_emp > 0.0, fmt("C: tau_emp %.4f > 0", d.tau_emp));
  const double ratio = d.tau_emp / d.tau_pred;
  c.require(ratio >= 0.5 && ratio <= 2.0, fmt("C: tau_emp / tau_pred = %.4f / %.4f = %.3f in [0.5, 2]", d.tau_emp,
                                              d.tau_pred, ratio));
}

void nl_bound(Check& c) {
  for (const auto& [name, spec] : {std::pair{"A", bench_a()}, std::pair{"C", bench_c()}}) {
    const auto m = build_gibbs_model(Solenoid(spec), 12);
    const auto b = nl_dimension_bound(m, default_eps_grid());
    c.require(b.bound < m.t0_lo, std::string(name) + fmt(": bound %.6f < t0_lo %.6f", b.bound, m.t0_lo));
    const std::vector<double> tiny{1e-3};
    const auto row = nl_dimension_bound(m, tiny).rows.at(0);
    if (b.irregular_empty) {
      // constant lambda': every cylinder has the mean exponent, so the
      // irregular channel is empty and carries no dimension
      c.require(is_degenerate(*m.table, Observable::log_lam), std::string(name) + ": irregular set empty");
    } else {
      // the bound is built on the upper end of the root enclosure
      c.require(std::abs(row.a_eps - b.t0) <= 1e-3,
                std::string(name) + fmt(": A_eps(1e-3) = %.6f within 1e-3 of t0 %.6f", row.a_eps, b.t0));
      c.require(row.a_eps >= m.t0_lo - 1e-3 && row.a_eps <= m.t0_hi + 1e-3,
                std::string(name) + fmt(": A_eps(1e-3) inside [%.6f, %.6f] widened by 1e-3", m.t0_lo, m.t0_hi));
    }
  }
}

void overlap(Check& c) {
  const Solenoid sol(bench_a());
  const double limit = (kRootA + 0.1) * std::log(2.0);
  for (int n = 8; n <= 14; ++n) {
    const auto o = overlap_multiplicity(sol, n, 256);
    if (n == 12) c.require(o.max_order >= 1, fmt("n=12: max overlap order %.0f >= 1", o.max_order));
    c.require(o.h_n <= limit, fmt("n=%.0f: h_n %.4f <= %.4f", n, o.h_n, limit));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Check& c) {
  const auto dir = fs::temp_directory_path() / "solenoid_acceptance_report";
  fs::remove_all(dir);
  std::string first, second;
#ifdef SOLENOID_CLI
  const std::string cmd = std::string(SOLENOID_CLI) + " report --config " + fixture("benchmark_a.json") +
                          " --seed 7 --out " + dir.string() + " > /dev/null";
  for (std::string* dst : {&first, &second}) {
    const int status = std::system(cmd.c_str());
    c.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "solenoid report exits 0");
    *dst = slurp(dir / "report.json");
    fs::remove_all(dir);
  }
#else
  auto cfg = load_config(fixture("benchmark_a.json"));
  cfg.seed = 7;
  for (std::string* dst : {&first, &second}) {
    write_report(run_command(cfg, "report"), dir);
    *dst = slurp(dir / "report.json");
    fs::remove_all(dir);
  }
#endif
  c.require(!first.empty() && first == second, fmt("report.json byte-identical (%.0f bytes)", first.size()));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"bowen root closed form", bowen_closed_form},
      {"pressure anchors", pressure_anchors},
      {"slice dimension", slice_dimension},
      {"full dimension", full_dimension},
      {"projection dimension", projection_dimension},
      {"exponents and entropy", exponents},
      {"regime flags", regime_flags},
      {"holonomy laws", holonomy_laws},
      {"bunched lipschitz stability", bunched_stability},
      {"transversality", transversality},
      {"large deviations", large_deviations},
      {"nl bound", nl_bound},
      {"overlap evidence", overlap},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("threw: ") + e.what());
    }
    const double secs = seconds_since(t);
    std::string detail;
    for (const auto& n : c.notes()) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("%s %2zu %-28s (%.1f s) %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                detail.c_str());
    for (const auto& f : c.failures()) std::printf("       failed: %s\n", f.c_str());
    std::fflush(stdout);
    if (!c.ok()) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
