#include "solenoid/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "solenoid/errors.hpp"
#include "solenoid/sampling.hpp"

namespace solenoid {

namespace {

void require_codable(const Solenoid& sol, std::size_t length, double tol) {
  if (!(std::pow(sol.bounds().fiber_contraction, static_cast<double>(length)) < tol)) {
    throw WordTooShort("past of length " + std::to_string(length) + " cannot reach tolerance " + std::to_string(tol) +
                       " (need " + std::to_string(coding_depth(sol, tol)) + ")");
  }
}

std::string digits(std::span<const Symbol> s) {
  Word w;
  w.symbols.assign(s.begin(), s.end());
  return w.str();
}

double leaf_y(const Solenoid& sol, std::span<const Symbol> past, double x) { return leaf_point(sol, past, x).point.y; }

double slope_at(const Solenoid& sol, std::span<const Symbol> past, double x, double h) {
  return (leaf_y(sol, past, x + h) - leaf_y(sol, past, x - h)) / (2.0 * h);
}

double crossing_angle(double sa, double sb) {
  double a = std::abs(std::atan(sa) - std::atan(sb));
  if (a > std::numbers::pi / 2) a = std::numbers::pi - a;
  return a;
}

}  // namespace

UnstableLeaf unstable_leaf(const Solenoid& sol, std::span<const Symbol> past, double margin, int samples, double tol) {
  if (samples < 2) throw PreconditionError("unstable_leaf: need at least 2 samples");
  if (margin < 0.0) throw PreconditionError("unstable_leaf: margin must be non-negative");
  require_codable(sol, past.size(), tol);
  UnstableLeaf leaf;
  leaf.past.assign(past.begin(), past.end());
  leaf.margin = margin;
  leaf.samples.resize(samples);
  const double span = kTwoPi + 2.0 * margin;
  for (int k = 0; k < samples; ++k) {
    const double x = k == samples - 1 ? kTwoPi + margin : -margin + span * k / (samples - 1);
    const auto r = leaf_point(sol, past, x);
    leaf.samples[k] = {x, r.point.y, r.point.z};
  }
  return leaf;
}

std::vector<IntersectionRecord> leaf_intersections(const Solenoid& sol, const UnstableLeaf& a, const UnstableLeaf& b,
                                                   IntersectionOptions opts) {
  if (a.past.empty() || b.past.empty() || a.past[0] == b.past[0]) {
    throw PreconditionError("leaf_intersections: pasts must differ in the leading symbol");
  }
  if (a.samples.size() < 2 || b.samples.size() < 2) throw PreconditionError("leaf_intersections: leaves need samples");
  const double lo = std::max(a.samples.front().x_lift, b.samples.front().x_lift);
  const double hi = std::min(a.samples.back().x_lift, b.samples.back().x_lift);

  const bool same_grid = a.samples.size() == b.samples.size() &&
                         std::equal(a.samples.begin(), a.samples.end(), b.samples.begin(),
                                    [](const LeafSample& p, const LeafSample& q) { return p.x_lift == q.x_lift; });
  std::vector<double> xs, gap;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const double x = a.samples[k].x_lift;
    if (x < lo || x > hi) continue;
    const double yb = same_grid ? b.samples[k].y : leaf_y(sol, b.past, x);
    xs.push_back(x);
    gap.push_back(a.samples[k].y - yb);
  }

  std::vector<IntersectionRecord> out;
  auto record = [&](double x) {
    IntersectionRecord r;
    r.x_lift = x;
    r.y = leaf_y(sol, a.past, x);
    const double sa = slope_at(sol, a.past, x, opts.slope_step);
    const double sb = slope_at(sol, b.past, x, opts.slope_step);
    r.angle = crossing_angle(sa, sb);
    r.near_tangent = std::abs(sa - sb) < opts.tangency_threshold;
    r.past_a = digits(a.past);
    r.past_b = digits(b.past);
    out.push_back(std::move(r));
  };
  auto g = [&](double x) { return leaf_y(sol, a.past, x) - leaf_y(sol, b.past, x); };

  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(gap[k]) <= opts.zero_tol) {
      // One record per coincident stretch.
      if (k == 0 || std::abs(gap[k - 1]) > opts.zero_tol) record(xs[k]);
      continue;
    }
    if (k + 1 < xs.size() && std::abs(gap[k + 1]) > opts.zero_tol && (gap[k] < 0.0) != (gap[k + 1] < 0.0)) {
      double l = xs[k];
      double h = xs[k + 1];
      const bool neg_left = gap[k] < 0.0;
      while (h - l > opts.refine_tol) {
        const double m = 0.5 * (l + h);
        if ((g(m) < 0.0) == neg_left) l = m; else h = m;
      }
      record(0.5 * (l + h));
    }
  }
  return out;
}

namespace {

struct PairOutcome {
  double min_angle = std::numeric_limits<double>::infinity();
  int near = 0;
  int crossings = 0;
};

}  // namespace

TransversalityResult min_transversal_angle(const Solenoid& sol, const GibbsModel& model, int pair_budget,
                                           TransversalityOptions opts, ParallelOptions par) {
  if (pair_budget < 1) throw PreconditionError("min_transversal_angle: pair budget must be at least 1");
  if (model.weights.empty()) throw PreconditionError("min_transversal_angle: model has no weights");
  const int d = sol.degree();
  const int n = model.n;
  const std::uint64_t group = model.weights.size() / d;

  const WeightedSampler first(model.weights);
  std::vector<WeightedSampler> others;
  for (int g = 0; g < d; ++g) {
    std::vector<double> w(model.weights);
    for (std::uint64_t i = g * group; i < (g + 1) * group; ++i) w[i] = 0.0;
    others.emplace_back(w);
  }

  const int depth = std::max(n, coding_depth(sol, kLeafTolerance));
  std::mt19937_64 rng(opts.seed);
  std::vector<std::pair<std::vector<Symbol>, std::vector<Symbol>>> pasts(pair_budget);
  for (auto& [pa, pb] : pasts) {
    const std::uint64_t ia = first(rng);
    const std::uint64_t ib = others[ia / group](rng);
    pa = word_at(ia, n, d, Direction::backward).symbols;
    pb = word_at(ib, n, d, Direction::backward).symbols;
    pa.resize(depth, 0);
    pb.resize(depth, 0);
  }

  std::vector<PairOutcome> outcome(pair_budget);
  parallel_for(pasts.size(), par, [&](std::size_t i) {
    const auto la = unstable_leaf(sol, pasts[i].first, 0.0, opts.leaf_samples);
    const auto lb = unstable_leaf(sol, pasts[i].second, 0.0, opts.leaf_samples);
    for (const auto& r : leaf_intersections(sol, la, lb, opts.intersect)) {
      ++outcome[i].crossings;
      if (r.near_tangent) ++outcome[i].near;
      else outcome[i].min_angle = std::min(outcome[i].min_angle, r.angle);
    }
  });

  TransversalityResult res;
  res.pairs = pair_budget;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : outcome) {
    res.near_tangency_count += o.near;
    res.intersections += o.crossings;
    best = std::min(best, o.min_angle);
  }
  if (std::isfinite(best)) res.alpha0_est = best;
  return res;
}

TransversalityResult min_transversal_angle(const Solenoid& sol, int n_past, int pair_budget, TransversalityOptions opts,
                                           ParallelOptions par) {
  if (pair_budget < 1) throw PreconditionError("min_transversal_angle: pair budget must be at least 1");
  return min_transversal_angle(sol, build_gibbs_model(sol, n_past, 1e-9, kDefaultEnumerationCap, par), pair_budget,
                               opts, par);
}

std::pair<Point3, Point3> holonomy_map(const Solenoid& sol, std::span<const Symbol> past, double x_src, double x_dst,
                                       double tol) {
  require_codable(sol, past.size(), tol);
  return {leaf_point(sol, past, x_src).point, leaf_point(sol, past, x_dst).point};
}

namespace {

// Concatenates Gibbs-sampled generation-n blocks.
void append_blocks(std::vector<Symbol>& past, std::size_t length, const GibbsModel& model, int d,
                   const WeightedSampler& sampler, std::mt19937_64& rng) {
  while (past.size() < length) {
    const auto block = word_at(sampler(rng), model.n, d, Direction::backward);
    for (Symbol s : block.symbols) {
      if (past.size() == length) break;
      past.push_back(s);
    }
  }
}

double fiber_distance(const Point3& a, const Point3& b) { return std::hypot(a.y - b.y, a.z - b.z); }

}  // namespace

HolonomyReport holonomy_lipschitz_scan(const Solenoid& sol, const GibbsModel& model, double x_src, double x_dst,
                                       HolonomyScanOptions opts, ParallelOptions par) {
  if (opts.pairs < 1) throw PreconditionError("holonomy_lipschitz_scan: pairs must be positive");
  if (model.weights.empty()) throw PreconditionError("holonomy_lipschitz_scan: model has no weights");
  const int d = sol.degree();
  const int n = model.n;
  const int pad = coding_depth(sol, opts.strong.coding_tol);
  const std::size_t length = static_cast<std::size_t>(2 * n + pad + 1);

  const WeightedSampler sampler(model.weights);
  std::mt19937_64 rng(opts.seed);

  // Draw everything up front so results do not depend on the worker count.
  struct Sample {
    std::vector<Symbol> past;
    std::vector<std::vector<Symbol>> partners;  // partners[k] shares exactly k leading symbols
  };
  std::vector<Sample> draws(opts.pairs);
  for (auto& s : draws) {
    append_blocks(s.past, length, model, d, sampler, rng);
    s.partners.resize(n);
    for (int k = 0; k < n; ++k) {
      std::vector<Symbol> other(s.past.begin(), s.past.begin() + k);
      const int shift = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d - 1));
      other.push_back(static_cast<Symbol>((s.past[k] + shift) % d));
      append_blocks(other, length, model, d, sampler, rng);
      s.partners[k] = std::move(other);
    }
  }

  std::vector<double> ratios(static_cast<std::size_t>(opts.pairs) * n);
  std::vector<StrongLipschitzResult> verdicts(opts.pairs);
  parallel_for(draws.size(), par, [&](std::size_t i) {
    const auto& s = draws[i];
    const auto [p, q] = holonomy_map(sol, s.past, x_src, x_dst, opts.strong.coding_tol);
    for (int k = 0; k < n; ++k) {
      const auto [p2, q2] = holonomy_map(sol, s.partners[k], x_src, x_dst, opts.strong.coding_tol);
      const double base = fiber_distance(p, p2);
      ratios[i * n + k] = base > 0.0 ? fiber_distance(q, q2) / base : 1.0;
    }
    verdicts[i] = strong_lipschitz_test(sol, s.past, x_src, n, 2 * n, opts.strong);
  });

  HolonomyReport rep;
  rep.x_src = x_src;
  rep.x_dst = x_dst;
  rep.n = n;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> col(opts.pairs);
    for (int i = 0; i < opts.pairs; ++i) col[i] = ratios[static_cast<std::size_t>(i) * n + k];
    std::sort(col.begin(), col.end());
    ScaleRatio row;
    row.shared = k;
    row.pairs = opts.pairs;
    row.min_ratio = col.front();
    row.max_ratio = col.back();
    row.median_ratio = col.size() % 2 ? col[col.size() / 2] : 0.5 * (col[col.size() / 2 - 1] + col[col.size() / 2]);
    rep.min_ratio = std::min(rep.min_ratio, row.min_ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.max_ratio);
    rep.scales.push_back(row);
  }

  rep.words_tested = opts.pairs;
  int flagged = 0;
  for (int i = 0; i < opts.pairs; ++i) {
    if (verdicts[i].indeterminate) ++rep.indeterminate;
    if (!verdicts[i].is_strong) {
      ++flagged;
      rep.flagged_words.push_back(digits(std::span<const Symbol>(draws[i].past).first(n)));
    }
  }
  // Words are drawn from the Gibbs weights, so the flagged share estimates
  // the flagged Gibbs mass.
  rep.flagged_weight = static_cast<double>(flagged) / opts.pairs;
  rep.strong_lipschitz_fraction = 1.0 - rep.flagged_weight;
  return rep;
}

}  // namespace solenoid
