#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "solenoid/coding.hpp"
#include "solenoid/interval.hpp"
#include "solenoid/parallel.hpp"
#include "solenoid/solenoid_map.hpp"

namespace solenoid {

// Which derivative a Birkhoff sum is taken of (always in log form).
enum class Potential { eta = 0, lam = 1, nu = 2 };

// Inf/sup of the log-derivative sum over the cylinder of a word. Backward
// words sum over x_{-1}, ..., x_{-n}; forward words over x, ..., eta^{n-1}(x).
// x is enclosed by the exact inverse-branch chain, y by forward interval
// propagation from [-1, 1] at the oldest position.
Interval birkhoff_bounds(const Solenoid& sol, const Word& w, Potential xi);
std::array<Interval, 3> birkhoff_bounds_all(const Solenoid& sol, std::span<const Symbol> past);

// Birkhoff enclosures for all d^n backward words, indexed by word_index.
class CylinderTable {
 public:
  static CylinderTable build(const Solenoid& sol, int n, std::uint64_t cap = kDefaultEnumerationCap,
                             ParallelOptions par = {});

  int generation() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return lo_[0].size(); }

  double inf(std::size_t i, Potential xi) const { return lo_[static_cast<int>(xi)][i]; }
  double sup(std::size_t i, Potential xi) const { return hi_[static_cast<int>(xi)][i]; }
  double mid(std::size_t i, Potential xi) const { return 0.5 * (inf(i, xi) + sup(i, xi)); }

 private:
  int n_ = 0;
  int d_ = 2;
  std::array<std::vector<double>, 3> lo_;
  std::array<std::vector<double>, 3> hi_;
};

struct PressureBracket {
  double t = 0.0;
  int n = 0;
  double p_lo = 0.0;
  double p_hi = 0.0;
};

// (1/n) log sum exp(t * S) over all words, S taken at the end that maximises
// (p_hi) or minimises (p_lo) the sum. Potential is t log lambda'.
PressureBracket pressure_bracket(const CylinderTable& table, double t);
PressureBracket pressure_bracket(const Solenoid& sol, double t, int n, std::uint64_t cap = kDefaultEnumerationCap,
                                 ParallelOptions par = {});

struct BowenInterval {
  double t0_lo = 0.0;
  double t0_hi = 0.0;
  int n = 0;
  double mid() const { return 0.5 * (t0_lo + t0_hi); }
  double width() const { return t0_hi - t0_lo; }
};

// Encloses the zero of t -> P(t log lambda'). Throws PreconditionError when
// the bracket does not straddle zero.
BowenInterval solve_bowen(const CylinderTable& table, double tol = 1e-6);
BowenInterval solve_bowen(const Solenoid& sol, int n, double tol = 1e-6, std::uint64_t cap = kDefaultEnumerationCap,
                          ParallelOptions par = {});

// weight(w) proportional to exp(t * S_mid(w, lambda')), normalised.
std::vector<double> gibbs_weights(const CylinderTable& table, double t);

struct Exponents {
  double chi_eta = 0.0;
  double chi_lam = 0.0;
  double chi_nu = 0.0;
  double entropy = 0.0;
};

Exponents lyapunov_exponents(const CylinderTable& table, std::span<const double> weights);

struct GibbsModel {
  double t0_lo = 0.0;
  double t0_hi = 0.0;
  int n = 0;
  std::shared_ptr<const CylinderTable> table;
  std::vector<double> weights;  // indexed by word_index
  double chi_eta = 0.0;
  double chi_lam = 0.0;
  double chi_nu = 0.0;
  double entropy = 0.0;

  double t0_mid() const { return 0.5 * (t0_lo + t0_hi); }
};

GibbsModel build_gibbs_model(const Solenoid& sol, int n, double tol = 1e-6, std::uint64_t cap = kDefaultEnumerationCap,
                             ParallelOptions par = {});
GibbsModel build_gibbs_model(std::shared_ptr<const CylinderTable> table, double tol = 1e-6);

struct RegimeFlags {
  bool thin = false;
  bool uniform_dissipation = false;
  bool bunching = false;
  // Grid extremes the two uniform flags were decided on.
  double sup_lam = 0.0;
  double sup_eta = 0.0;
  double bunching_slack = 0.0;  // inf of eta' nu' - lambda'
};

RegimeFlags classify_regime(const Solenoid& sol, const GibbsModel& model, int grid = 256);

}  // namespace solenoid
