#include <algorithm>
#include <cmath>
#include <limits>

#include "solenoid/errors.hpp"
#include "solenoid/lamination.hpp"

namespace solenoid {

namespace {

constexpr int kMaxTubeDepth = 64;
constexpr int kCrossingGrid = 16;

struct TubeBox {
  Interval y;        // y over the whole lift window
  double thickness;  // y-thickness at a single lift
};

// xs[j] encloses the lift of x_{-(j+1)} for lifts in the window.
TubeBox tube_box(const Solenoid& sol, std::span<const Interval> xs) {
  Interval y{-1.0, 1.0};
  double thick = 2.0;
  for (std::size_t j = xs.size(); j-- > 0;) {
    thick *= std::abs(sol.lam_prime(xs[j], y).hi);
    y = intersect(sol.fiber_y(xs[j], y), Interval{-1.0, 1.0});
    if (y.lo > y.hi) y = Interval{0.5 * (y.lo + y.hi)};
  }
  return {y, thick};
}

Interval child(const Solenoid& sol, Interval parent, Symbol s) {
  const double shift = kTwoPi * s;
  return {sol.inverse_lift(parent.lo + shift), sol.inverse_lift(parent.hi + shift)};
}

struct Search {
  const Solenoid& sol;
  std::span<const Symbol> own;
  double centre;
  Interval window;
  Interval own_y;
  double fine;
  std::size_t budget;

  std::size_t nodes = 0;
  bool exhausted = false;
  double delta = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::vector<Interval> xs;
  std::vector<Symbol> q;

  double own_y_at(double x) const { return leaf_point(sol, own, x).point.y; }

  void settle() {
    auto g = [&](double x) { return leaf_point(sol, q, x).point.y - own_y_at(x); };
    gap = std::min(gap, std::abs(g(centre)));
    double prev_x = window.lo;
    double prev = g(prev_x);
    for (int k = 1; k <= kCrossingGrid; ++k) {
      const double x = window.lo + window.width() * k / kCrossingGrid;
      const double cur = g(x);
      if (prev == 0.0) delta = std::min(delta, std::abs(prev_x - centre));
      if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
        double l = prev_x;
        double h = x;
        const bool neg_left = prev < 0.0;
        for (int it = 0; it < 80 && h - l > 1e-16 * std::max(1.0, std::abs(h)); ++it) {
          const double m = 0.5 * (l + h);
          if ((g(m) < 0.0) == neg_left) l = m; else h = m;
        }
        delta = std::min(delta, std::abs(0.5 * (l + h) - centre));
      }
      prev_x = x;
      prev = cur;
    }
    if (prev == 0.0) delta = std::min(delta, std::abs(prev_x - centre));
  }

  void visit() {
    if (exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    const TubeBox box = tube_box(sol, xs);
    if (box.y.hi < own_y.lo || box.y.lo > own_y.hi) return;
    if (box.thickness <= fine || static_cast<int>(xs.size()) >= kMaxTubeDepth) {
      settle();
      return;
    }
    const Interval parent = xs.back();
    for (int s = 0; s < sol.degree(); ++s) {
      xs.push_back(child(sol, parent, static_cast<Symbol>(s)));
      q.push_back(static_cast<Symbol>(s));
      visit();
      xs.pop_back();
      q.pop_back();
      if (exhausted) return;
    }
  }
};

}  // namespace

StrongLipschitzResult strong_lipschitz_test(const Solenoid& sol, std::span<const Symbol> past, double x_lift,
                                            int n_min, int n_max, StrongLipschitzOptions opts) {
  if (n_min < 1 || n_max < n_min) throw PreconditionError("strong_lipschitz_test: need 1 <= n_min <= n_max");
  if (!(opts.L > 0.0)) throw PreconditionError("strong_lipschitz_test: L must be positive");
  if (opts.search_factor < opts.L) throw PreconditionError("strong_lipschitz_test: search_factor must be at least L");
  const int pad = coding_depth(sol, opts.coding_tol);
  if (past.size() < static_cast<std::size_t>(n_max + pad)) {
    throw WordTooShort("strong_lipschitz_test: past of length " + std::to_string(past.size()) + " shorter than " +
                       std::to_string(n_max + pad));
  }

  std::vector<double> lifts(n_max + 1);
  std::vector<double> eta_prod(n_max + 1, 1.0);
  lifts[0] = x_lift;
  for (int k = 0; k < n_max; ++k) {
    lifts[k + 1] = sol.inverse_lift(lifts[k] + kTwoPi * past[k]);
    eta_prod[k + 1] = eta_prod[k] * sol.eta_prime(lifts[k + 1]);
  }

  StrongLipschitzResult res;
  for (int k = n_min; k <= n_max; ++k) {
    const auto own = past.subspan(k);
    const double scale = 1.0 / eta_prod[k];
    const double centre = lifts[k];
    const double radius = opts.search_factor * scale;
    const Interval window{centre - radius, centre + radius};

    std::vector<Interval> own_xs;
    own_xs.reserve(own.size());
    Interval w = window;
    for (Symbol s : own) {
      w = child(sol, w, s);
      own_xs.push_back(w);
    }
    const Interval own_y = tube_box(sol, own_xs).y;

    const double inf = std::numeric_limits<double>::infinity();
    Search search{sol,  own, centre, window, own_y, 0.01 * std::max(own_y.width(), 1e-3 * radius), opts.node_budget,
                  0,    false, inf,  inf,    {},    {}};
    for (int s = 0; s < sol.degree(); ++s) {
      if (s == own[0]) continue;
      search.xs = {child(sol, window, static_cast<Symbol>(s))};
      search.q = {static_cast<Symbol>(s)};
      search.visit();
      if (search.exhausted) break;
    }

    DepthMargin dm;
    dm.depth = k;
    dm.indeterminate = search.exhausted;
    dm.delta_x = search.delta;
    dm.margin = search.delta / (opts.L * scale);
    dm.planar_margin = search.gap / (opts.L * scale);
    res.depths.push_back(dm);
    if (dm.indeterminate) {
      res.indeterminate = true;
      continue;
    }
    if (dm.margin < res.worst_margin) {
      res.worst_margin = dm.margin;
      res.worst_depth = k;
    }
    if (dm.margin < 1.0) res.is_strong = false;
  }
  return res;
}

}  // namespace solenoid
