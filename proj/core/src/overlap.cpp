#include <algorithm>
#include <cmath>
#include <numeric>

#include "solenoid/errors.hpp"
#include "solenoid/geometry.hpp"
#include "solenoid_internal.hpp"

namespace solenoid {

namespace {

// Intervals of one family sorted by lower end, with running max of upper end;
// answers "does any member meet [a, b]".
class IntervalIndex {
 public:
  void build(std::span<const double> lo, std::span<const double> hi) {
    const std::size_t m = lo.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo[a] < lo[b]; });
    lo_.resize(m);
    run_hi_.resize(m);
    double top = -1e300;
    for (std::size_t k = 0; k < m; ++k) {
      lo_[k] = lo[order[k]];
      top = std::max(top, hi[order[k]]);
      run_hi_[k] = top;
    }
  }

  bool meets(double a, double b) const {
    const auto it = std::upper_bound(lo_.begin(), lo_.end(), b);
    if (it == lo_.begin()) return false;
    return run_hi_[static_cast<std::size_t>(it - lo_.begin()) - 1] >= a;
  }

 private:
  std::vector<double> lo_;
  std::vector<double> run_hi_;
};

}  // namespace

OverlapReport overlap_multiplicity(const Solenoid& sol, int n, int x_samples, std::uint64_t cap,
                                   ParallelOptions par) {
  if (n < 1) throw PreconditionError("overlap_multiplicity: n must be at least 1");
  if (x_samples < 1) throw PreconditionError("overlap_multiplicity: x_samples must be positive");
  const int d = sol.degree();
  const std::uint64_t count = checked_word_count(d, n, cap);
  const std::uint64_t group = count / d;  // words sharing the leading past symbol are contiguous

  const auto table = CylinderTable::build(sol, n, cap, par);
  std::vector<double> half(count);
  for (std::uint64_t i = 0; i < count; ++i) half[i] = std::exp(table.sup(i, Potential::lam));

  std::vector<double> ys(count), zs(count), lo(count), hi(count);
  std::vector<std::uint32_t> touches(count, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

  for (int j = 0; j < x_samples; ++j) {
    const double x = kTwoPi * (j + 0.5) / x_samples;
    detail::fill_slice(sol, x, n, ys, zs, par);
    for (std::uint64_t i = 0; i < count; ++i) {
      lo[i] = ys[i] - half[i];
      hi[i] = ys[i] + half[i];
    }

    // Touch with a tube of a different leading symbol, one index per group.
    for (int g = 0; g < d; ++g) {
      std::vector<double> olo, ohi;
      olo.reserve(count - group);
      ohi.reserve(count - group);
      for (std::uint64_t i = 0; i < count; ++i) {
        if (i / group == static_cast<std::uint64_t>(g)) continue;
        olo.push_back(lo[i]);
        ohi.push_back(hi[i]);
      }
      IntervalIndex index;
      index.build(olo, ohi);
      for (std::uint64_t i = g * group; i < (g + 1) * group; ++i)
        if (index.meets(lo[i], hi[i])) ++touches[i];
    }

    // Pairs overlapping on every fiber so far.
    if (j == 0) {
      std::vector<std::uint32_t> order(count);
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return lo[a] < lo[b]; });
      for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = a + 1; b < count && lo[order[b]] <= hi[order[a]]; ++b) {
          pairs.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
          if (pairs.size() > cap) throw CapExceeded("overlap_multiplicity: candidate pair count exceeds cap");
        }
      }
    } else {
      std::erase_if(pairs, [&](const auto& p) {
        return std::abs(ys[p.first] - ys[p.second]) > half[p.first] + half[p.second];
      });
    }
  }

  OverlapReport rep;
  rep.n = n;
  rep.x_samples = x_samples;
  std::vector<std::uint32_t> order_of(count, 0);
  for (const auto& [a, b] : pairs) {
    ++order_of[a];
    ++order_of[b];
  }
  const std::uint32_t top = *std::max_element(order_of.begin(), order_of.end());
  rep.max_order = static_cast<int>(top);
  rep.order_histogram.assign(top + 1, 0);
  for (auto o : order_of) ++rep.order_histogram[o];

  rep.max_touch_fibers = *std::max_element(touches.begin(), touches.end());
  rep.max_touch_cells = static_cast<double>(rep.max_touch_fibers) * static_cast<double>(count) / x_samples;
  rep.h_n = std::log(std::max(1.0, rep.max_touch_cells)) / n;
  return rep;
}

}  // namespace solenoid
