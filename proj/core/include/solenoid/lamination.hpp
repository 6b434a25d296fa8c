#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solenoid/coding.hpp"
#include "solenoid/parallel.hpp"
#include "solenoid/solenoid_map.hpp"
#include "solenoid/thermo.hpp"

namespace solenoid {

struct LeafSample {
  double x_lift = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Sampled unstable leaf over the lifts [-margin, 2pi + margin].
struct UnstableLeaf {
  std::vector<Symbol> past;
  std::vector<LeafSample> samples;
  double margin = 0.0;
};

// Coding tolerance of leaf samples.
inline constexpr double kLeafTolerance = 1e-9;

// Throws WordTooShort when the past cannot reach `tol`.
UnstableLeaf unstable_leaf(const Solenoid& sol, std::span<const Symbol> past, double margin, int samples,
                           double tol = kLeafTolerance);

struct IntersectionRecord {
  double x_lift = 0.0;
  double y = 0.0;
  double angle = 0.0;  // in [0, pi/2]
  bool near_tangent = false;
  std::string past_a;
  std::string past_b;
};

struct IntersectionOptions {
  double refine_tol = 1e-10;
  double slope_step = 1e-5;
  double tangency_threshold = 1e-6;
  double zero_tol = 1e-12;  // |y_a - y_b| below this counts as coincident
};

// Crossings of the (x, y) projections of two leaves whose pasts differ in the
// leading symbol. Coincident stretches give one near-tangent record each.
std::vector<IntersectionRecord> leaf_intersections(const Solenoid& sol, const UnstableLeaf& a, const UnstableLeaf& b,
                                                   IntersectionOptions opts = {});

struct TransversalityResult {
  double alpha0_est = std::numeric_limits<double>::quiet_NaN();  // NaN when nothing crossed
  int near_tangency_count = 0;
  int pairs = 0;
  int intersections = 0;
};

struct TransversalityOptions {
  int leaf_samples = 512;
  std::uint64_t seed = 1;
  IntersectionOptions intersect;
};

// Minimum crossing angle over Gibbs-sampled pairs of length-n_past words with
// distinct leading symbols.
TransversalityResult min_transversal_angle(const Solenoid& sol, int n_past, int pair_budget,
                                           TransversalityOptions opts = {}, ParallelOptions par = {});
TransversalityResult min_transversal_angle(const Solenoid& sol, const GibbsModel& model, int pair_budget,
                                           TransversalityOptions opts = {}, ParallelOptions par = {});

// Leaf points over the lifts x_src and x_dst on the leaf coded by `past`.
std::pair<Point3, Point3> holonomy_map(const Solenoid& sol, std::span<const Symbol> past, double x_src, double x_dst,
                                       double tol = kLeafTolerance);

struct DepthMargin {
  int depth = 0;
  double delta_x = std::numeric_limits<double>::infinity();  // x-distance to the nearest crossing
  double margin = std::numeric_limits<double>::infinity();   // delta_x / (L / eta_depth)
  double planar_margin = std::numeric_limits<double>::infinity();
  bool indeterminate = false;
};

struct StrongLipschitzOptions {
  double L = 1.0;
  // Crossings are searched within search_factor / eta_depth of the point;
  // must be at least L for a verdict. Independent of L so margins scale
  // exactly as 1/L.
  double search_factor = 4.0;
  std::size_t node_budget = 20000;
  double coding_tol = 1e-12;
};

struct StrongLipschitzResult {
  bool is_strong = true;
  bool indeterminate = false;
  double worst_margin = std::numeric_limits<double>::infinity();
  int worst_depth = -1;
  std::vector<DepthMargin> depths;
};

// Checks, for depths n_min..n_max, that the backward iterate of the point on
// lift x_lift stays L / eta_depth away (in x) from crossings of its leaf with
// leaves of a different leading symbol.
StrongLipschitzResult strong_lipschitz_test(const Solenoid& sol, std::span<const Symbol> past, double x_lift,
                                            int n_min, int n_max, StrongLipschitzOptions opts = {});

struct ScaleRatio {
  int shared = 0;  // symbols shared by the two pasts
  int pairs = 0;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
};

struct HolonomyReport {
  double x_src = 0.0;
  double x_dst = 0.0;
  int n = 0;
  std::vector<ScaleRatio> scales;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int words_tested = 0;
  int indeterminate = 0;
  double flagged_weight = 0.0;  // Gibbs share of sampled words failing the strong-Lipschitz test
  double strong_lipschitz_fraction = 1.0;
  std::vector<std::string> flagged_words;
};

struct HolonomyScanOptions {
  int pairs = 200;  // sampled words; each gives one pair per scale and one strong-Lipschitz test
  std::uint64_t seed = 1;
  StrongLipschitzOptions strong;
};

// Holonomy ratio dist(q, q') / dist(p, p') for Gibbs-sampled same-fiber pairs
// separated at cylinder depths 0..n-1, plus the strong-Lipschitz test of each
// sampled word over depths n..2n.
HolonomyReport holonomy_lipschitz_scan(const Solenoid& sol, const GibbsModel& model, double x_src, double x_dst,
                                       HolonomyScanOptions opts = {}, ParallelOptions par = {});

}  // namespace solenoid
