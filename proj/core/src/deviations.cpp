#include "solenoid/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double observable(const CylinderTable& table, std::size_t i, Observable obs) {
  return obs == Observable::log_lam ? table.mid(i, Potential::lam) : -table.mid(i, Potential::eta);
}

struct Tilt {
  double pressure = 0.0;  // per symbol
  double mean = 0.0;      // per symbol
};

Tilt tilt(const CylinderTable& table, double t0, Observable obs, double t) {
  const std::size_t count = table.size();
  std::vector<double> v(count);
  double top = -kInf;
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = t0 * table.mid(i, Potential::lam) + t * observable(table, i, obs);
    top = std::max(top, v[i]);
  }
  double total = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double w = std::exp(v[i] - top);
    total += w;
    first += w * observable(table, i, obs);
  }
  const double n = table.generation();
  return {(top + std::log(total)) / n, first / total / n};
}

}  // namespace

bool is_degenerate(const CylinderTable& table, Observable obs) {
  const auto xi = obs == Observable::log_lam ? Potential::lam : Potential::eta;
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.sup(i, xi) - table.inf(i, xi) > 1e-12 * table.generation()) return false;
    lo = std::min(lo, table.mid(i, xi));
    hi = std::max(hi, table.mid(i, xi));
  }
  return hi - lo <= 1e-12 * table.generation();
}

RatePoint rate_function(const CylinderTable& table, double t0, Observable obs, double t_aux) {
  RatePoint r;
  r.t_aux = t_aux;
  if (is_degenerate(table, obs)) {
    r.degenerate = true;
    return r;
  }
  const Tilt base = tilt(table, t0, obs, 0.0);
  const Tilt tilted = tilt(table, t0, obs, t_aux);
  r.eps = tilted.mean - base.mean;
  r.rate = std::max(0.0, t_aux * tilted.mean - (tilted.pressure - base.pressure));
  return r;
}

RatePoint rate_at_deviation(const CylinderTable& table, double t0, Observable obs, double eps) {
  if (eps == 0.0) return {};
  if (is_degenerate(table, obs)) return {0.0, eps, kInf, true};
  const double sign = eps > 0.0 ? 1.0 : -1.0;
  const double target = std::abs(eps);
  auto reach = [&](double t) { return sign * rate_function(table, t0, obs, sign * t).eps; };

  double lo = 0.0;
  double hi = 0.5;
  while (reach(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) return {sign * hi, eps, kInf, false};
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (reach(mid) < target) lo = mid; else hi = mid;
  }
  return rate_function(table, t0, obs, sign * 0.5 * (lo + hi));
}

double two_sided_rate(const CylinderTable& table, double t0, Observable obs, double eps) {
  if (eps == 0.0) return 0.0;
  return std::min(rate_at_deviation(table, t0, obs, std::abs(eps)).rate,
                  rate_at_deviation(table, t0, obs, -std::abs(eps)).rate);
}

std::vector<double> default_eps_grid() {
  std::vector<double> grid(12);
  const double a = std::log(1e-3);
  const double b = std::log(0.3);
  for (int k = 0; k < 12; ++k) grid[k] = std::exp(a + (b - a) * k / 11.0);
  return grid;
}

NlBound nl_dimension_bound(const GibbsModel& model, std::span<const double> eps_grid) {
  if (!model.table) throw PreconditionError("nl_dimension_bound: model has no cylinder table");
  if (eps_grid.empty()) throw PreconditionError("nl_dimension_bound: empty eps grid");
  if (!(model.chi_lam < 0.0 && model.chi_eta > 0.0)) throw PreconditionError("nl_dimension_bound: needs chi_lam < 0 < chi_eta");
  const auto& table = *model.table;
  const double t0 = model.t0_hi;
  const double lam = -model.chi_lam;  // |chi_lam|
  const double eta = model.chi_eta;
  const bool lam_flat = is_degenerate(table, Observable::log_lam);
  const bool eta_flat = is_degenerate(table, Observable::neg_log_eta);

  NlBound out;
  out.t0 = t0;
  out.irregular_empty = lam_flat && eta_flat;
  out.bound = kInf;
  for (double eps : eps_grid) {
    if (!(eps > 0.0)) throw PreconditionError("nl_dimension_bound: eps must be positive");
    NlBoundRow row;
    row.eps = eps;
    row.feasible = lam - eps > 0.0;
    row.ratio = row.feasible ? (eta + eps) / (lam - eps) : kInf;
    row.feasible = row.feasible && row.ratio < 1.0;
    if (row.feasible) {
      const double r = row.ratio;
      row.rate_lam = lam_flat ? kInf : two_sided_rate(table, model.t0_mid(), Observable::log_lam, eps);
      row.rate_eta = eta_flat ? kInf : two_sided_rate(table, model.t0_mid(), Observable::neg_log_eta, eps);
      // Irregular parts; an infinite rate means the corresponding set is empty.
      const double a1 = t0 - (row.rate_lam / lam) / (1.0 + 1.0 / r);
      const double a2 = t0 - (row.rate_eta / lam) / (1.0 + r);
      const double a3 = t0 - (row.rate_lam / lam) / (1.0 + r);
      row.a_eps = std::max({a1, a2, a3});
      // Regular part that stays close to the intersection set.
      row.b_eps = t0 - t0 * (1.0 - eps / lam - r) * lam / ((1.0 + r) * (lam + eps));
      const double value = std::max(row.a_eps, row.b_eps);
      if (value < out.bound) {
        out.bound = value;
        out.best_eps = eps;
        out.a_eps = row.a_eps;
        out.b_eps = row.b_eps;
      }
    } else {
      row.rate_lam = row.rate_eta = row.a_eps = row.b_eps = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
  }
  if (!std::isfinite(out.bound)) {
    out.bound = t0;
    out.best_eps = std::numeric_limits<double>::quiet_NaN();
  }
  // the whole slice already has dimension t0
  out.bound = std::min(out.bound, t0);
  return out;
}

DeviationDecay deviation_decay(const Solenoid& sol, int n_lo, int n_hi, double eps, std::uint64_t cap,
                               ParallelOptions par) {
  if (n_lo < 1 || n_hi < n_lo + 1) throw PreconditionError("deviation_decay: need 1 <= n_lo < n_hi");
  if (!(eps > 0.0)) throw PreconditionError("deviation_decay: eps must be positive");
  const auto ref = build_gibbs_model(sol, n_hi, 1e-9, cap, par);
  DeviationDecay out;
  out.eps = eps;
  out.chi_ref = ref.chi_lam;
  out.tau_pred = two_sided_rate(*ref.table, ref.t0_mid(), Observable::log_lam, eps);

  for (int n = n_lo; n <= n_hi; ++n) {
    const auto table = n == n_hi ? ref.table : std::make_shared<const CylinderTable>(CylinderTable::build(sol, n, cap, par));
    const auto w = gibbs_weights(*table, ref.t0_mid());
    double mass = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (std::abs(table->mid(i, Potential::lam) / n - out.chi_ref) >= eps) mass += w[i];
    out.generations.push_back(n);
    out.fractions.push_back(mass);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < out.fractions.size(); ++k) {
    if (!(out.fractions[k] > 0.0)) continue;
    const double x = out.generations[k];
    const double y = std::log(out.fractions[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.tau_emp = -slope;
  }
  return out;
}

}  // namespace solenoid
