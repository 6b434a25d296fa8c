#pragma once

#include <span>
#include <vector>

#include "solenoid/thermo.hpp"

namespace solenoid {

// Observable whose Birkhoff averages are tilted.
enum class Observable { log_lam, neg_log_eta };

struct RatePoint {
  double t_aux = 0.0;
  double eps = 0.0;   // mean of the observable under the tilted measure minus the untilted mean
  double rate = 0.0;  // >= 0; +inf when the deviation is out of reach
  bool degenerate = false;
};

// True when the observable's Birkhoff sums are the same on every cylinder,
// so no deviation has finite rate.
bool is_degenerate(const CylinderTable& table, Observable obs);

// Tilts the Gibbs measure of t0 log lambda' by t_aux times the observable.
// Uses midpoint Birkhoff sums. rate = t * m(t) - (P(t) - P(0)).
RatePoint rate_function(const CylinderTable& table, double t0, Observable obs, double t_aux);

// Rate at a signed deviation eps, found by solving eps(t) = eps.
RatePoint rate_at_deviation(const CylinderTable& table, double t0, Observable obs, double eps);

// Smaller of the rates at +eps and -eps.
double two_sided_rate(const CylinderTable& table, double t0, Observable obs, double eps);

struct NlBoundRow {
  double eps = 0.0;
  double ratio = 0.0;  // (chi_eta + eps) / (-chi_lam - eps)
  bool feasible = false;
  double rate_lam = 0.0;
  double rate_eta = 0.0;
  double a_eps = 0.0;
  double b_eps = 0.0;
};

struct NlBound {
  double best_eps = 0.0;
  double a_eps = 0.0;
  double b_eps = 0.0;
  double bound = 0.0;
  double t0 = 0.0;
  bool irregular_empty = false;
  std::vector<NlBoundRow> rows;
};

// Twelve log-spaced values in [1e-3, 0.3].
std::vector<double> default_eps_grid();

// Dimension bound of the weak non-Lipschitz part of a stable slice:
// min over the grid of max(A_eps, B_eps).
NlBound nl_dimension_bound(const GibbsModel& model, std::span<const double> eps_grid);

struct DeviationDecay {
  double eps = 0.0;
  double chi_ref = 0.0;
  std::vector<int> generations;
  std::vector<double> fractions;  // Gibbs mass of cylinders deviating by >= eps
  double tau_emp = 0.0;           // minus the fitted slope of log fraction against n
  double tau_pred = 0.0;          // two-sided rate at eps
};

// Gibbs mass of generation-n cylinders whose mean log lambda' deviates from
// chi_lam by at least eps, for n in [n_lo, n_hi], with an exponential fit.
DeviationDecay deviation_decay(const Solenoid& sol, int n_lo, int n_hi, double eps,
                               std::uint64_t cap = kDefaultEnumerationCap, ParallelOptions par = {});

}  // namespace solenoid
