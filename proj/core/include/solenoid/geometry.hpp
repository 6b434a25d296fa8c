#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solenoid/coding.hpp"
#include "solenoid/parallel.hpp"
#include "solenoid/solenoid_map.hpp"
#include "solenoid/thermo.hpp"

namespace solenoid {

struct CloudProvenance {
  std::string spec_hash;
  int n = 0;
  std::optional<double> fiber;  // empty for the full attractor
  int fibers = 0;               // x-samples of an attractor cloud along axis 0
};

// Flat storage, `dim` coordinates per point.
//   dim 3: (x, y, z);  dim 2: (y, z) on one fiber;  dim 1: projections.
struct PointCloud {
  int dim = 2;
  std::vector<double> coords;
  CloudProvenance provenance;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

// One representative per backward word of length n, in word_index order.
PointCloud slice_cloud(const Solenoid& sol, double x, int n, std::uint64_t cap = kDefaultEnumerationCap,
                       ParallelOptions par = {});

// Union of slices over fibers 2 pi j / fibers, as 3D points.
PointCloud attractor_cloud(const Solenoid& sol, int n, int fibers, std::uint64_t cap = kDefaultEnumerationCap,
                           ParallelOptions par = {});

// Keeps one coordinate of every point.
PointCloud project(const PointCloud& cloud, int axis);

struct BoxCountOptions {
  int j_min = -3;  // coarsest scale 2^3
  int j_max = 48;
  // Averages counts over three fixed grid offsets instead of the origin grid.
  bool offset_average = false;
};

struct DimensionFit {
  double slope = 0.0;
  double r2 = 0.0;
  double scale_lo = 0.0;  // fitted window
  double scale_hi = 0.0;
  bool fiber_corrected = false;
  std::vector<std::pair<double, double>> counts;  // (r, N(r)) at every admissible scale
};

// Dyadic r = 2^-j is admissible when 2 <= N(r) <= |cloud| / 4. The slope is
// the least-squares fit of log N(r) against log(1/r) over the k_scales finest
// admissible scales: the coarse end sits in the pre-asymptotic regime where
// the grid straddles a handful of pieces. For a cloud sampled on `fibers`
// equally spaced x values, a box column narrower than the spacing s holds at
// most one fiber, so N(r) is scaled by s / r there (the count a continuum of
// fibers would give). Throws PreconditionError on fewer than 100 points or
// fewer than k_scales admissible scales.
DimensionFit box_dimension(const PointCloud& cloud, int k_scales = 5, BoxCountOptions opts = {});

struct DensityRow {
  double radius = 0.0;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
};

struct DensityReport {
  double t0 = 0.0;
  int n = 0;
  double x = 0.0;
  int samples = 0;
  std::vector<DensityRow> rows;
  // Share of sampled points whose smallest ratio is within 2x the typical
  // level (bounded-ratio, packing side) and whose largest ratio exceeds
  // (d + 1)x the typical level (overlap, Hausdorff-zero side).
  double packing_fraction = 0.0;
  double overlap_fraction = 0.0;
};

// mu(B(p, r)) / r^t0 on the slice over x, for Gibbs-sampled centres p;
// mu sums the model weights of words whose representative lies in the ball.
DensityReport local_density_stats(const Solenoid& sol, const GibbsModel& model, double x,
                                  std::span<const double> radii, int samples, std::uint64_t seed,
                                  ParallelOptions par = {});

struct OverlapReport {
  int n = 0;
  int x_samples = 0;
  // histogram[k] = number of cylinders overlapped (on every sampled fiber)
  // by exactly k others.
  std::vector<std::uint64_t> order_histogram;
  int max_order = 0;
  // Largest number of sampled fibers on which one tube touches a tube with a
  // different leading past symbol, and the matching count of generation-n
  // base cells.
  std::uint64_t max_touch_fibers = 0;
  double max_touch_cells = 0.0;
  double h_n = 0.0;  // (1/n) log max(1, max_touch_cells)
};

// Projects generation-n slice representatives to y with rigorous half-widths
// exp(sup log lambda_n) on fibers 2 pi (j + 1/2) / x_samples.
OverlapReport overlap_multiplicity(const Solenoid& sol, int n, int x_samples,
                                   std::uint64_t cap = kDefaultEnumerationCap, ParallelOptions par = {});

}  // namespace solenoid
