#include <algorithm>
#include <cmath>
#include <limits>

#include "solenoid/errors.hpp"
#include "solenoid/thermo.hpp"

namespace solenoid {

namespace {

template <class Value>
double log_sum_exp(std::size_t count, Value&& value) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) top = std::max(top, value(i));
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += std::exp(value(i) - top);
  return top + std::log(acc);
}

}  // namespace

PressureBracket pressure_bracket(const CylinderTable& table, double t) {
  const auto lam = Potential::lam;
  const double n = table.generation();
  const double hi = log_sum_exp(table.size(), [&](std::size_t i) {
    return t * (t >= 0.0 ? table.sup(i, lam) : table.inf(i, lam));
  });
  const double lo = log_sum_exp(table.size(), [&](std::size_t i) {
    return t * (t >= 0.0 ? table.inf(i, lam) : table.sup(i, lam));
  });
  return {t, table.generation(), lo / n, hi / n};
}

PressureBracket pressure_bracket(const Solenoid& sol, double t, int n, std::uint64_t cap, ParallelOptions par) {
  return pressure_bracket(CylinderTable::build(sol, n, cap, par), t);
}

BowenInterval solve_bowen(const CylinderTable& table, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("solve_bowen: tolerance must be positive");
  // Both bracket ends are decreasing in t; returns the bisection interval of
  // the chosen end's zero.
  auto bisect = [&](bool upper) {
    auto g = [&](double t) {
      const auto b = pressure_bracket(table, t);
      return upper ? b.p_hi : b.p_lo;
    };
    double lo = 0.0;
    double hi = 4.0;
    if (g(lo) < 0.0) throw PreconditionError("solve_bowen: pressure at t=0 is negative, no root to bracket");
    while (g(hi) >= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1024.0) throw PreconditionError("solve_bowen: pressure does not become negative");
    }
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) >= 0.0) lo = mid; else hi = mid;
    }
    return Interval{lo, hi};
  };
  BowenInterval out;
  out.n = table.generation();
  out.t0_lo = bisect(false).lo;
  out.t0_hi = bisect(true).hi;
  return out;
}

BowenInterval solve_bowen(const Solenoid& sol, int n, double tol, std::uint64_t cap, ParallelOptions par) {
  return solve_bowen(CylinderTable::build(sol, n, cap, par), tol);
}

std::vector<double> gibbs_weights(const CylinderTable& table, double t) {
  std::vector<double> w(table.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = t * table.mid(i, Potential::lam);
    top = std::max(top, w[i]);
  }
  double total = 0.0;
  for (auto& v : w) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

Exponents lyapunov_exponents(const CylinderTable& table, std::span<const double> weights) {
  if (weights.size() != table.size()) throw PreconditionError("weights do not match the cylinder table");
  Exponents e;
  double entropy = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    e.chi_eta += w * table.mid(i, Potential::eta);
    e.chi_lam += w * table.mid(i, Potential::lam);
    e.chi_nu += w * table.mid(i, Potential::nu);
    if (w > 0.0) entropy -= w * std::log(w);
  }
  const double n = table.generation();
  e.chi_eta /= n;
  e.chi_lam /= n;
  e.chi_nu /= n;
  e.entropy = entropy / n;
  return e;
}

GibbsModel build_gibbs_model(std::shared_ptr<const CylinderTable> table, double tol) {
  if (!table) throw PreconditionError("build_gibbs_model: missing table");
  const auto root = solve_bowen(*table, tol);
  GibbsModel m;
  m.t0_lo = root.t0_lo;
  m.t0_hi = root.t0_hi;
  m.n = table->generation();
  m.weights = gibbs_weights(*table, m.t0_mid());
  const auto e = lyapunov_exponents(*table, m.weights);
  m.chi_eta = e.chi_eta;
  m.chi_lam = e.chi_lam;
  m.chi_nu = e.chi_nu;
  m.entropy = e.entropy;
  m.table = std::move(table);
  return m;
}

GibbsModel build_gibbs_model(const Solenoid& sol, int n, double tol, std::uint64_t cap, ParallelOptions par) {
  return build_gibbs_model(std::make_shared<const CylinderTable>(CylinderTable::build(sol, n, cap, par)), tol);
}

RegimeFlags classify_regime(const Solenoid& sol, const GibbsModel& model, int grid) {
  if (grid < 4) throw PreconditionError("classify_regime: grid too coarse");
  RegimeFlags f;
  f.thin = model.chi_nu < model.chi_lam && model.chi_lam < -model.chi_eta;

  // Derivatives do not depend on z, and are affine in y, so y = -1, 1 and a
  // few interior values cover the disc.
  constexpr int kYs = 33;
  double sup_lam = -std::numeric_limits<double>::infinity();
  double sup_eta = -std::numeric_limits<double>::infinity();
  double slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double x = kTwoPi * k / grid;
    const double e = sol.eta_prime(x);
    sup_eta = std::max(sup_eta, e);
    for (int j = 0; j < kYs; ++j) {
      const double y = -1.0 + 2.0 * j / (kYs - 1);
      const double l = sol.lam_prime(x, y);
      sup_lam = std::max(sup_lam, l);
      slack = std::min(slack, e * sol.nu_prime(x, y) - l);
    }
  }
  f.sup_lam = sup_lam;
  f.sup_eta = sup_eta;
  f.bunching_slack = slack;
  f.uniform_dissipation = sup_lam < 1.0 / sup_eta;
  f.bunching = slack > 0.0;
  return f;
}

}  // namespace solenoid
