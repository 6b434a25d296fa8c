#include <algorithm>
#include <cmath>

#include "solenoid/errors.hpp"
#include "solenoid/thermo.hpp"

namespace solenoid {

namespace {

// The base circle is cut into this many arcs; each cylinder is enclosed arc
// by arc, which keeps the positions of one orbit coupled and roughly halves
// the bracket width on nonlinear specs.
constexpr int kBaseArcs = 8;

Interval base_arc(int j) { return {kTwoPi * j / kBaseArcs, kTwoPi * (j + 1) / kBaseArcs}; }

Interval checked_log(Interval v, const char* hypothesis) {
  if (!(v.lo > 0.0)) throw SpecInvalid(hypothesis, "derivative enclosure reaches zero");
  return log(v);
}

Interval child_interval(const Solenoid& sol, Interval parent, Symbol s) {
  const double shift = kTwoPi * s;
  return {sol.inverse_lift(parent.lo + shift), sol.inverse_lift(parent.hi + shift)};
}

// xs[k] encloses x_{-(k+1)}. y is propagated from the oldest position.
std::array<Interval, 3> sums_from_chain(const Solenoid& sol, std::span<const Interval> xs) {
  std::array<Interval, 3> sums{Interval{0.0}, Interval{0.0}, Interval{0.0}};
  Interval y{-1.0, 1.0};
  for (std::size_t k = xs.size(); k-- > 0;) {
    const Interval x = xs[k];
    sums[0] = sums[0] + checked_log(sol.eta_prime(x), "η′ > 1");
    sums[1] = sums[1] + checked_log(sol.lam_prime(x, y), "0 < λ′");
    sums[2] = sums[2] + checked_log(sol.nu_prime(x, y), "0 < ν′");
    y = intersect(sol.fiber_y(x, y), Interval{-1.0, 1.0});
    if (y.lo > y.hi) y = Interval{0.5 * (y.lo + y.hi)};
  }
  return sums;
}

void merge(std::array<Interval, 3>& acc, const std::array<Interval, 3>& sums, bool first) {
  for (int p = 0; p < 3; ++p) acc[p] = first ? sums[p] : hull(acc[p], sums[p]);
}

}  // namespace

std::array<Interval, 3> birkhoff_bounds_all(const Solenoid& sol, std::span<const Symbol> past) {
  for (Symbol s : past)
    if (s >= sol.degree()) throw PreconditionError("word symbol out of range");
  std::array<Interval, 3> out{};
  std::vector<Interval> xs(past.size());
  for (int j = 0; j < kBaseArcs; ++j) {
    Interval x = base_arc(j);
    for (std::size_t k = 0; k < past.size(); ++k) xs[k] = x = child_interval(sol, x, past[k]);
    merge(out, sums_from_chain(sol, xs), j == 0);
  }
  return out;
}

Interval birkhoff_bounds(const Solenoid& sol, const Word& w, Potential xi) {
  std::vector<Symbol> past(w.symbols);
  // The orbit x, ..., eta^{n-1}(x) of a forward word is the backward chain of
  // eta^{n}(x) read in reverse.
  if (w.direction == Direction::forward) std::reverse(past.begin(), past.end());
  return birkhoff_bounds_all(sol, past)[static_cast<int>(xi)];
}

CylinderTable CylinderTable::build(const Solenoid& sol, int n, std::uint64_t cap, ParallelOptions par) {
  if (n < 1) throw PreconditionError("cylinder table needs generation >= 1");
  const int d = sol.degree();
  const std::uint64_t count = checked_word_count(d, n, cap);

  CylinderTable table;
  table.n_ = n;
  table.d_ = d;
  for (auto& v : table.lo_) v.assign(count, 0.0);
  for (auto& v : table.hi_) v.assign(count, 0.0);

  // Split on a short prefix so each task owns a contiguous index range.
  int split = 0;
  std::uint64_t tasks = 1;
  while (split < n && tasks < 256) {
    tasks *= d;
    ++split;
  }

  parallel_for(tasks, par, [&](std::size_t task) {
    // xs[j][k] encloses x_{-(k+1)} over base arc j
    std::vector<std::vector<Interval>> xs(kBaseArcs, std::vector<Interval>(n));
    const Word prefix = word_at(task, split, d, Direction::backward);
    for (int j = 0; j < kBaseArcs; ++j) {
      Interval x = base_arc(j);
      for (int k = 0; k < split; ++k) xs[j][k] = x = child_interval(sol, x, prefix.symbols[k]);
    }
    auto visit = [&](auto&& self, int depth, std::uint64_t index) -> void {
      if (depth == n) {
        std::array<Interval, 3> sums{};
        for (int j = 0; j < kBaseArcs; ++j) merge(sums, sums_from_chain(sol, xs[j]), j == 0);
        for (int p = 0; p < 3; ++p) {
          table.lo_[p][index] = sums[p].lo;
          table.hi_[p][index] = sums[p].hi;
        }
        return;
      }
      for (int s = 0; s < d; ++s) {
        for (int j = 0; j < kBaseArcs; ++j) {
          const Interval parent = depth == 0 ? base_arc(j) : xs[j][depth - 1];
          xs[j][depth] = child_interval(sol, parent, static_cast<Symbol>(s));
        }
        self(self, depth + 1, index * d + s);
      }
    };
    visit(visit, split, task);
  });
  return table;
}

}  // namespace solenoid
