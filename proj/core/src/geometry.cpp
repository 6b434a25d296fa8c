#include "solenoid/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "solenoid/errors.hpp"
#include "solenoid/sampling.hpp"
#include "solenoid_internal.hpp"

namespace solenoid {

namespace detail {

void fill_slice(const Solenoid& sol, double x_lift, int n, std::span<double> ys, std::span<double> zs,
                ParallelOptions par) {
  const int d = sol.degree();
  const auto& s = sol.spec();
  if (n == 0) {
    ys[0] = 0.0;
    zs[0] = 0.0;
    return;
  }
  int split = 0;
  std::uint64_t tasks = 1;
  while (split < n && tasks < 256) {
    tasks *= d;
    ++split;
  }

  parallel_for(tasks, par, [&](std::size_t task) {
    // Per depth k (1-based): lift of x_{-k} and the fiber-map coefficients there.
    std::vector<double> lift(n + 1), ay(n + 1), uy(n + 1), az(n + 1), vz(n + 1);
    lift[0] = x_lift;
    auto set_depth = [&](int k, int sym) {
      lift[k] = sol.inverse_lift(lift[k - 1] + kTwoPi * sym);
      const double sn = std::sin(lift[k]);
      const double cs = std::cos(lift[k]);
      ay[k] = s.lam0 + s.lam1 * sn;
      uy[k] = s.u_amp * cs;
      az[k] = s.nu0 + s.nu1 * cs;
      vz[k] = s.v_amp * sn;
    };
    std::uint64_t prefix = task;
    std::vector<int> digits(split);
    for (int k = split - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(prefix % d);
      prefix /= d;
    }
    for (int k = 0; k < split; ++k) set_depth(k + 1, digits[k]);

    auto visit = [&](auto&& self, int depth, std::uint64_t index) -> void {
      if (depth == n) {
        double y = 0.0;
        double z = 0.0;
        for (int k = n; k >= 1; --k) {
          const double ny = ay[k] * y + s.lam2 * y * y + uy[k];
          z = az[k] * z + s.nu2 * y * z + vz[k];
          y = ny;
        }
        ys[index] = y;
        zs[index] = z;
        return;
      }
      for (int sym = 0; sym < d; ++sym) {
        set_depth(depth + 1, sym);
        self(self, depth + 1, index * d + sym);
      }
    };
    visit(visit, split, task);
  });
}

}  // namespace detail

PointCloud slice_cloud(const Solenoid& sol, double x, int n, std::uint64_t cap, ParallelOptions par) {
  const std::uint64_t count = checked_word_count(sol.degree(), n, cap);
  std::vector<double> ys(count), zs(count);
  detail::fill_slice(sol, x, n, ys, zs, par);
  PointCloud cloud;
  cloud.dim = 2;
  cloud.coords.resize(2 * count);
  for (std::uint64_t i = 0; i < count; ++i) {
    cloud.coords[2 * i] = ys[i];
    cloud.coords[2 * i + 1] = zs[i];
  }
  cloud.provenance.n = n;
  cloud.provenance.fiber = wrap_angle(x);
  return cloud;
}

PointCloud attractor_cloud(const Solenoid& sol, int n, int fibers, std::uint64_t cap, ParallelOptions par) {
  if (fibers <= 0) throw PreconditionError("attractor_cloud: fibers must be positive");
  const std::uint64_t count = checked_word_count(sol.degree(), n, cap);
  if (count * static_cast<std::uint64_t>(fibers) > cap) {
    throw CapExceeded("fibers * d^n = " + std::to_string(count * fibers) + " exceeds enumeration cap");
  }
  PointCloud cloud;
  cloud.dim = 3;
  cloud.coords.resize(3 * count * fibers);
  cloud.provenance.n = n;
  cloud.provenance.fibers = fibers;
  std::vector<double> ys(count), zs(count);
  for (int j = 0; j < fibers; ++j) {
    const double x = kTwoPi * j / fibers;
    detail::fill_slice(sol, x, n, ys, zs, par);
    double* out = cloud.coords.data() + 3 * count * j;
    for (std::uint64_t i = 0; i < count; ++i) {
      out[3 * i] = x;
      out[3 * i + 1] = ys[i];
      out[3 * i + 2] = zs[i];
    }
  }
  return cloud;
}

PointCloud project(const PointCloud& cloud, int axis) {
  if (axis < 0 || axis >= cloud.dim) throw PreconditionError("project: axis out of range");
  PointCloud out;
  out.dim = 1;
  out.provenance = cloud.provenance;
  if (axis != 0) out.provenance.fibers = 0;
  out.coords.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) out.coords.push_back(cloud.coords[i * cloud.dim + axis]);
  return out;
}

namespace {

double count_boxes(const PointCloud& cloud, int j, double offset) {
  const double scale = std::ldexp(1.0, j);
  const std::size_t m = cloud.size();
  std::vector<std::array<std::int64_t, 3>> keys(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::array<std::int64_t, 3> k{0, 0, 0};
    for (int a = 0; a < cloud.dim; ++a)
      k[a] = static_cast<std::int64_t>(std::floor(cloud.coords[i * cloud.dim + a] * scale + offset));
    keys[i] = k;
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

DimensionFit box_dimension(const PointCloud& cloud, int k_scales, BoxCountOptions opts) {
  if (cloud.dim < 1 || cloud.dim > 3) throw PreconditionError("box_dimension: dim must be 1, 2 or 3");
  const std::size_t m = cloud.size();
  if (m < 100) throw PreconditionError("box_dimension: too few points (need at least 100)");
  if (k_scales < 5) throw PreconditionError("box_dimension: k_scales must be at least 5");

  DimensionFit fit;
  bool repeated = true;
  for (std::size_t i = 1; i < m && repeated; ++i)
    for (int a = 0; a < cloud.dim; ++a)
      if (cloud.coords[i * cloud.dim + a] != cloud.coords[a]) repeated = false;
  if (repeated) {
    fit.slope = 0.0;
    fit.r2 = 1.0;
    return fit;
  }

  const double upper = static_cast<double>(m) / 4.0;
  const double spacing = cloud.provenance.fibers > 0 ? kTwoPi / cloud.provenance.fibers : 0.0;
  for (int j = opts.j_min; j <= opts.j_max; ++j) {
    double count = 0.0;
    if (opts.offset_average) {
      for (double off : {0.0, 1.0 / 3.0, 2.0 / 3.0}) count += count_boxes(cloud, j, off);
      count /= 3.0;
    } else {
      count = count_boxes(cloud, j, 0.0);
    }
    if (count > upper) break;
    const double r = std::ldexp(1.0, -j);
    if (count < 2.0) continue;
    if (spacing > 0.0 && r < spacing) count *= spacing / r;
    fit.counts.emplace_back(r, count);
  }
  if (static_cast<int>(fit.counts.size()) < k_scales) {
    throw PreconditionError("box_dimension: degenerate scale range (" + std::to_string(fit.counts.size()) +
                            " admissible scales, need " + std::to_string(k_scales) + ")");
  }

  const std::span<const std::pair<double, double>> window(fit.counts.data() + fit.counts.size() - k_scales,
                                                          static_cast<std::size_t>(k_scales));
  fit.fiber_corrected = spacing > 0.0 && window.back().first < spacing;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const double k = static_cast<double>(k_scales);
  for (const auto& [r, count] : window) {
    const double x = -std::log(r);
    const double y = std::log(count);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / k;
  const double vy = syy - sy * sy / k;
  const double cxy = sxy - sx * sy / k;
  fit.slope = cxy / vx;
  fit.r2 = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  fit.scale_hi = window.front().first;
  fit.scale_lo = window.back().first;
  return fit;
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

}  // namespace

DensityReport local_density_stats(const Solenoid& sol, const GibbsModel& model, double x,
                                  std::span<const double> radii, int samples, std::uint64_t seed,
                                  ParallelOptions par) {
  if (!model.table) throw PreconditionError("local_density_stats: model has no cylinder table");
  if (radii.empty()) throw PreconditionError("local_density_stats: no radii");
  if (samples < 1) throw PreconditionError("local_density_stats: samples must be positive");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) throw PreconditionError("local_density_stats: radii must be decreasing");
  const int n = model.n;
  const double resolution = std::pow(sol.bounds().lam_sup, n);
  if (radii.back() < resolution) {
    throw PreconditionError("local_density_stats: radius " + std::to_string(radii.back()) +
                            " below resolution " + std::to_string(resolution));
  }

  const auto cloud = slice_cloud(sol, x, n, kDefaultEnumerationCap, par);
  const std::size_t m = cloud.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cloud.coords[2 * a] < cloud.coords[2 * b];
  });
  std::vector<double> ys(m), zs(m), ws(m);
  for (std::size_t k = 0; k < m; ++k) {
    ys[k] = cloud.coords[2 * order[k]];
    zs[k] = cloud.coords[2 * order[k] + 1];
    ws[k] = model.weights[order[k]];
  }

  std::mt19937_64 rng(seed);
  const WeightedSampler sampler(model.weights);
  std::vector<std::size_t> centres(samples);
  for (auto& c : centres) c = sampler(rng);

  const double t0 = model.t0_mid();
  const std::size_t nr = radii.size();
  std::vector<double> ratio(static_cast<std::size_t>(samples) * nr);
  parallel_for(centres.size(), par, [&](std::size_t s) {
    const double py = cloud.coords[2 * centres[s]];
    const double pz = cloud.coords[2 * centres[s] + 1];
    for (std::size_t k = 0; k < nr; ++k) {
      const double r = radii[k];
      auto it = std::lower_bound(ys.begin(), ys.end(), py - r);
      double mass = 0.0;
      for (auto q = static_cast<std::size_t>(it - ys.begin()); q < m && ys[q] <= py + r; ++q) {
        const double dy = ys[q] - py;
        const double dz = zs[q] - pz;
        if (dy * dy + dz * dz <= r * r) mass += ws[q];
      }
      ratio[s * nr + k] = mass / std::pow(r, t0);
    }
  });

  DensityReport rep;
  rep.t0 = t0;
  rep.n = n;
  rep.x = wrap_angle(x);
  rep.samples = samples;
  for (std::size_t k = 0; k < nr; ++k) {
    std::vector<double> col(samples);
    for (int s = 0; s < samples; ++s) col[s] = ratio[s * nr + k];
    DensityRow row;
    row.radius = radii[k];
    row.min_ratio = *std::min_element(col.begin(), col.end());
    row.max_ratio = *std::max_element(col.begin(), col.end());
    row.median_ratio = median_of(col);
    rep.rows.push_back(row);
  }
  const double typical = median_of(ratio);
  int packing = 0;
  int overlap = 0;
  for (int s = 0; s < samples; ++s) {
    const auto first = ratio.begin() + s * nr;
    const double lo = *std::min_element(first, first + nr);
    const double hi = *std::max_element(first, first + nr);
    if (lo <= 2.0 * typical) ++packing;
    if (hi >= (sol.degree() + 1.0) * typical) ++overlap;
  }
  rep.packing_fraction = static_cast<double>(packing) / samples;
  rep.overlap_fraction = static_cast<double>(overlap) / samples;
  return rep;
}

}  // namespace solenoid
