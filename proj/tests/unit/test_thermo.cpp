#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "solenoid/deviations.hpp"
#include "solenoid/errors.hpp"
#include "solenoid/sampling.hpp"
#include "solenoid/thermo.hpp"
#include "support.hpp"

using namespace solenoid;
using namespace testing_support;

namespace {

const double kRootA = std::log(2.0) / std::log(2.5);

std::shared_ptr<const CylinderTable> table_of(const SolenoidSpec& s, int n) {
  return std::make_shared<const CylinderTable>(CylinderTable::build(Solenoid(s), n));
}

}  // namespace

TEST(Birkhoff, ConstantPotentials) {
  const Solenoid sol(bench_a());
  std::mt19937_64 rng(1);
  for (int n : {1, 5, 12}) {
    Word w;
    for (int k = 0; k < n; ++k) w.symbols.push_back(static_cast<Symbol>(rng() % 2));
    const auto lam = birkhoff_bounds(sol, w, Potential::lam);
    EXPECT_NEAR(lam.lo, n * std::log(0.4), 1e-12);
    EXPECT_NEAR(lam.hi, n * std::log(0.4), 1e-12);
    const auto eta = birkhoff_bounds(sol, w, Potential::eta);
    EXPECT_NEAR(eta.lo, n * std::log(2.0), 1e-12);
    EXPECT_NEAR(eta.hi, n * std::log(2.0), 1e-12);
  }
}

TEST(Birkhoff, NonlinearOneSymbol) {
  const Solenoid sol(bench_c());
  for (const char* s : {"0", "1"}) {
    const auto b = birkhoff_bounds(sol, Word::parse(s, Direction::backward, 2), Potential::lam);
    EXPECT_GE(b.lo, std::log(0.30) - 1e-15);
    EXPECT_LE(b.hi, std::log(0.40) + 1e-15);
    EXPECT_LT(b.lo, b.hi);
  }
}

TEST(Birkhoff, EnclosesSampledOrbits) {
  // Any orbit segment whose base points follow the word, started anywhere in
  // the disc, has its log-derivative sums inside the enclosure.
  for (const auto& spec : {bench_c(), bench_q()}) {
    const Solenoid sol(spec);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
      const int n = 1 + static_cast<int>(rng() % 10);
      std::vector<Symbol> past(n);
      for (auto& s : past) s = static_cast<Symbol>(rng() % 2);
      const auto bounds = birkhoff_bounds_all(sol, past);
      std::vector<double> lifts{kTwoPi * uniform01(rng)};
      for (Symbol s : past) lifts.push_back(sol.inverse_lift(lifts.back() + kTwoPi * s));
      double y = -1.0 + 2.0 * uniform01(rng);
      double sums[3] = {0.0, 0.0, 0.0};
      for (int k = n; k >= 1; --k) {
        const double x = lifts[k];
        sums[0] += std::log(sol.eta_prime(x));
        sums[1] += std::log(sol.lam_prime(x, y));
        sums[2] += std::log(sol.nu_prime(x, y));
        y = std::clamp(sol.fiber_y(x, y), -1.0, 1.0);
      }
      for (int p = 0; p < 3; ++p) {
        EXPECT_GE(sums[p], bounds[p].lo - 1e-12);
        EXPECT_LE(sums[p], bounds[p].hi + 1e-12);
      }
    }
  }
}

TEST(Birkhoff, ForwardWordIsReversedChain) {
  const Solenoid sol(bench_c());
  const auto fwd = Word::parse("0011", Direction::forward, 2);
  const auto bwd = Word::parse("1100", Direction::backward, 2);
  const auto a = birkhoff_bounds(sol, fwd, Potential::lam);
  const auto b = birkhoff_bounds_all(sol, std::vector<Symbol>{1, 1, 0, 0})[1];
  EXPECT_DOUBLE_EQ(a.lo, b.lo);
  EXPECT_DOUBLE_EQ(a.hi, b.hi);
  EXPECT_DOUBLE_EQ(birkhoff_bounds(sol, bwd, Potential::lam).lo, b.lo);
}

TEST(Pressure, ZeroTemperatureIsLogDegree) {
  for (const auto& spec : {bench_a(), bench_b(), bench_c(), bench_d3(), bench_q()}) {
    const Solenoid sol(spec);
    for (int n : {3, 7}) {
      const auto b = pressure_bracket(sol, 0.0, n);
      EXPECT_NEAR(b.p_lo, std::log(sol.degree()), 1e-9);
      EXPECT_NEAR(b.p_hi, std::log(sol.degree()), 1e-9);
    }
  }
}

TEST(Pressure, ClosedFormAtOne) {
  const auto b = pressure_bracket(Solenoid(bench_a()), 1.0, 8);
  EXPECT_NEAR(b.p_lo, std::log(2.0) + std::log(0.4), 1e-12);
  EXPECT_NEAR(b.p_hi, std::log(2.0) + std::log(0.4), 1e-12);
}

TEST(Pressure, NonlinearBracketShrinks) {
  const Solenoid sol(bench_c());
  const auto b10 = pressure_bracket(sol, 0.75, 10);
  const auto b5 = pressure_bracket(sol, 0.75, 5);
  EXPECT_LT(b10.p_lo, b10.p_hi);
  EXPECT_TRUE(std::isfinite(b10.p_lo) && std::isfinite(b10.p_hi));
  EXPECT_LT(b10.p_hi - b10.p_lo, b5.p_hi - b5.p_lo);
}

TEST(Pressure, NestedUnderDoubling) {
  for (const auto& spec : {bench_c(), bench_q()}) {
    const Solenoid sol(spec);
    for (int n : {3, 5, 6}) {
      const auto small = CylinderTable::build(sol, n);
      const auto big = CylinderTable::build(sol, 2 * n);
      for (double t : {0.0, 0.3, 0.75, 1.5, 3.0}) {
        const auto a = pressure_bracket(small, t);
        const auto b = pressure_bracket(big, t);
        EXPECT_LE(b.p_hi, a.p_hi + 1e-9) << "n=" << n << " t=" << t;
        EXPECT_GE(b.p_lo, a.p_lo - 1e-9) << "n=" << n << " t=" << t;
      }
    }
  }
}

TEST(Pressure, StrictlyDecreasing) {
  for (const auto& spec : {bench_a(), bench_c(), bench_d3(), bench_q()}) {
    const auto table = CylinderTable::build(Solenoid(spec), 6);
    auto prev = pressure_bracket(table, 0.0);
    for (int i = 1; i < 20; ++i) {
      const auto cur = pressure_bracket(table, 0.1 * i);
      EXPECT_LT(cur.p_lo, prev.p_lo);
      EXPECT_LT(cur.p_hi, prev.p_hi);
      prev = cur;
    }
  }
}

TEST(Pressure, CapExceeded) {
  EXPECT_THROW(pressure_bracket(Solenoid(bench_a()), 1.0, 10, 512), CapExceeded);
}

TEST(Bowen, ClosedFormBenchmarkA) {
  const auto r = solve_bowen(Solenoid(bench_a()), 8, 1e-6);
  EXPECT_LE(r.t0_lo, kRootA);
  EXPECT_GE(r.t0_hi, kRootA);
  EXPECT_LE(r.width(), 1e-5);
}

TEST(Bowen, ClosedFormDegreeThree) {
  const auto r = solve_bowen(Solenoid(bench_d3()), 6, 1e-6);
  EXPECT_LE(r.t0_lo, 0.5 + 1e-12);
  EXPECT_GE(r.t0_hi, 0.5 - 1e-12);
  EXPECT_LE(r.width(), 2e-6);
}

TEST(Bowen, NonlinearNesting) {
  const Solenoid sol(bench_c());
  const auto r12 = solve_bowen(sol, 12, 1e-6);
  const auto r16 = solve_bowen(sol, 16, 1e-6);
  EXPECT_LT(r12.width(), 0.02);
  EXPECT_LE(r12.t0_lo, r16.t0_lo + 1e-6);
  EXPECT_GE(r12.t0_hi, r16.t0_hi - 1e-6);
  const auto r6 = solve_bowen(sol, 6, 1e-6);
  EXPECT_LE(r6.t0_lo, r12.t0_lo + 1e-6);
  EXPECT_GE(r6.t0_hi, r12.t0_hi - 1e-6);
}

TEST(Gibbs, UniformOnConstantPotential) {
  const auto table = CylinderTable::build(Solenoid(bench_a()), 3);
  const auto w = gibbs_weights(table, kRootA);
  ASSERT_EQ(w.size(), 8u);
  for (double v : w) EXPECT_NEAR(v, 0.125, 1e-15);
}

TEST(Gibbs, NormalizedAndRatioBounded) {
  const auto table = CylinderTable::build(Solenoid(bench_c()), 8);
  const double t = 0.66;
  const auto w = gibbs_weights(table, t);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  EXPECT_LE(*hi / *lo, std::exp(t * 8 * (std::log(0.40) - std::log(0.30))));
}

TEST(Gibbs, QuasiMultiplicative) {
  // weight(w1 w2) / (weight(w1) weight(w2)) stays within a fixed factor
  const Solenoid sol(bench_c());
  double worst = 1.0;
  for (int half : {3, 4, 5, 6}) {
    const auto m = build_gibbs_model(sol, half);
    const auto big = build_gibbs_model(sol, 2 * half);
    const std::uint64_t count = m.weights.size();
    for (std::uint64_t a = 0; a < count; ++a) {
      for (std::uint64_t b = 0; b < count; ++b) {
        const double q = big.weights[a * count + b] / (m.weights[a] * m.weights[b]);
        worst = std::max({worst, q, 1.0 / q});
      }
    }
  }
  EXPECT_LT(worst, 4.0);
  RecordProperty("quasi_multiplicativity_K", std::to_string(worst));
}

TEST(Exponents, ClosedFormsBenchmarkA) {
  const auto m = build_gibbs_model(Solenoid(bench_a()), 12);
  EXPECT_NEAR(m.chi_lam, std::log(0.4), 1e-9);
  EXPECT_NEAR(m.chi_nu, std::log(0.25), 1e-9);
  EXPECT_NEAR(m.chi_eta, std::log(2.0), 1e-9);
  EXPECT_NEAR(m.entropy, std::log(2.0), 1e-9);
  EXPECT_NEAR(m.entropy - m.t0_mid() * (-m.chi_lam), 0.0, 1e-6);
}

TEST(Exponents, EntropyConverges) {
  const Solenoid sol(bench_c());
  const auto m8 = build_gibbs_model(sol, 8);
  const auto m12 = build_gibbs_model(sol, 12);
  EXPECT_NEAR(m8.entropy, m12.entropy, 0.05);
  EXPECT_GE(m12.entropy, 0.0);
  EXPECT_LT(m12.chi_nu, m12.chi_lam);
  EXPECT_LT(m12.chi_lam, 0.0);
  EXPECT_LT(0.0, m12.chi_eta);
  EXPECT_NEAR(m12.entropy, m12.t0_mid() * (-m12.chi_lam), 0.02);
}

TEST(Regime, BenchmarkFlags) {
  const Solenoid a(bench_a()), b(bench_b()), c(bench_c());
  const auto fa = classify_regime(a, build_gibbs_model(a, 8));
  EXPECT_TRUE(fa.thin);
  EXPECT_TRUE(fa.uniform_dissipation);
  EXPECT_TRUE(fa.bunching);
  const auto fb = classify_regime(b, build_gibbs_model(b, 8));
  EXPECT_TRUE(fb.thin);
  EXPECT_FALSE(fb.bunching);
  const auto fc = classify_regime(c, build_gibbs_model(c, 8));
  EXPECT_TRUE(fc.uniform_dissipation);
  EXPECT_NEAR(fc.sup_lam * fc.sup_eta, 0.40 * 2.3, 1e-12);
}

TEST(Rate, NoTiltNoRate) {
  const auto table = CylinderTable::build(Solenoid(bench_c()), 8);
  const auto r = rate_function(table, 0.66, Observable::log_lam, 0.0);
  EXPECT_NEAR(r.eps, 0.0, 1e-15);
  EXPECT_NEAR(r.rate, 0.0, 1e-15);
}

TEST(Rate, ConstantPotentialIsDegenerate) {
  const auto table = CylinderTable::build(Solenoid(bench_a()), 8);
  EXPECT_TRUE(rate_function(table, kRootA, Observable::log_lam, 0.5).degenerate);
  EXPECT_TRUE(std::isinf(rate_at_deviation(table, kRootA, Observable::log_lam, 0.01).rate));
}

TEST(Rate, NonlinearPositiveAndMonotone) {
  const auto table = CylinderTable::build(Solenoid(bench_c()), 10);
  const auto half = rate_function(table, 0.66, Observable::log_lam, 0.5);
  const auto quarter = rate_function(table, 0.66, Observable::log_lam, 0.25);
  EXPECT_GT(half.rate, 0.0);
  EXPECT_GT(half.eps, 0.0);
  EXPECT_GE(half.rate, quarter.rate);
  EXPECT_GT(half.eps, quarter.eps);
}

TEST(Rate, InversionHitsTarget) {
  const auto table = CylinderTable::build(Solenoid(bench_c()), 10);
  for (double eps : {-0.02, 0.01, 0.03}) {
    const auto r = rate_at_deviation(table, 0.66, Observable::log_lam, eps);
    EXPECT_NEAR(r.eps, eps, 1e-9);
    EXPECT_GT(r.rate, 0.0);
  }
  EXPECT_LE(two_sided_rate(table, 0.66, Observable::log_lam, 0.02),
            rate_at_deviation(table, 0.66, Observable::log_lam, 0.02).rate);
}

TEST(NlBound, BenchmarkAUsesRegularChannelOnly) {
  const auto m = build_gibbs_model(Solenoid(bench_a()), 10);
  const auto b = nl_dimension_bound(m, default_eps_grid());
  EXPECT_TRUE(b.irregular_empty);
  double best_b = INFINITY;
  for (const auto& r : b.rows)
    if (r.feasible) best_b = std::min(best_b, r.b_eps);
  EXPECT_DOUBLE_EQ(b.bound, best_b);
  EXPECT_LT(b.bound, kRootA);
}

TEST(NlBound, BenchmarkCBelowBowenRoot) {
  const auto m = build_gibbs_model(Solenoid(bench_c()), 10);
  const auto b = nl_dimension_bound(m, default_eps_grid());
  EXPECT_FALSE(b.irregular_empty);
  EXPECT_LT(b.bound, m.t0_lo);
  EXPECT_LE(b.bound, b.t0);
  // small deviations cost nothing, so the irregular channel tends to t0
  const std::vector<double> tiny{1e-3};
  EXPECT_NEAR(nl_dimension_bound(m, tiny).rows[0].a_eps, b.t0, 1e-3);
}

TEST(NlBound, DefaultGrid) {
  const auto g = default_eps_grid();
  ASSERT_EQ(g.size(), 12u);
  EXPECT_NEAR(g.front(), 1e-3, 1e-15);
  EXPECT_NEAR(g.back(), 0.3, 1e-14);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], g[1] / g[0], 1e-12);
}

TEST(Decay, FractionsShrinkOnNonlinearSpec) {
  const auto d = deviation_decay(Solenoid(bench_c()), 6, 11, 0.05);
  ASSERT_EQ(d.generations.size(), 6u);
  EXPECT_GT(d.tau_emp, 0.0);
  EXPECT_GT(d.tau_pred, 0.0);
  EXPECT_LT(d.fractions.back(), d.fractions.front());
}
