#include "solenoid/solenoid_map.hpp"

#include <cmath>
#include <sstream>

#include "solenoid/errors.hpp"

namespace solenoid {

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

namespace {

// Largest singular value of [[a, 0], [b, c]] with a, b, c >= 0.
double lower_triangular_norm(double a, double b, double c) {
  const double tr = a * a + b * b + c * c;
  const double det = a * c;
  const double disc = std::max(0.0, tr * tr - 4.0 * det * det);
  return std::sqrt(0.5 * (tr + std::sqrt(disc)));
}

}  // namespace

Solenoid::Solenoid(const SolenoidSpec& spec) : spec_(spec) {
  if (spec_.d < 2) throw SpecInvalid("d ≥ 2", "d = " + std::to_string(spec_.d));
  if (spec_.d > 64) throw SpecInvalid("d ≤ 64", "d = " + std::to_string(spec_.d));
  if (!(spec_.d - std::abs(spec_.eta_eps) > 1.0)) {
    std::ostringstream os;
    os << "d - |eta_eps| = " << spec_.d - std::abs(spec_.eta_eps);
    throw SpecInvalid("η′ > 1", os.str());
  }

  auto& b = bounds_;
  const double eps = std::abs(spec_.eta_eps);
  b.eta_inf = spec_.d - eps;
  b.eta_sup = spec_.d + eps;
  b.lam_sup = spec_.lam0 + std::abs(spec_.lam1) + 2.0 * std::abs(spec_.lam2);
  b.lam_inf = spec_.lam0 - std::abs(spec_.lam1) - 2.0 * std::abs(spec_.lam2);
  b.nu_sup = spec_.nu0 + std::abs(spec_.nu1) + std::abs(spec_.nu2);
  b.nu_inf = spec_.nu0 - std::abs(spec_.nu1) - std::abs(spec_.nu2);
  b.off_sup = std::abs(spec_.nu2);
  const double lam_abs = std::max(std::abs(b.lam_sup), std::abs(b.lam_inf));
  const double nu_abs = std::max(std::abs(b.nu_sup), std::abs(b.nu_inf));
  b.fiber_contraction = lower_triangular_norm(lam_abs, b.off_sup, nu_abs);

  branch_points_.resize(spec_.d + 1);
  branch_points_[0] = 0.0;
  for (int i = 1; i < spec_.d; ++i) branch_points_[i] = inverse_lift(kTwoPi * i);
  branch_points_[spec_.d] = kTwoPi;
}

double Solenoid::eta_lift(double x) const { return spec_.d * x + spec_.eta_eps * std::sin(x); }

double Solenoid::eta_prime(double x) const { return spec_.d + spec_.eta_eps * std::cos(x); }

double Solenoid::lam_prime(double x, double y) const {
  return spec_.lam0 + spec_.lam1 * std::sin(x) + 2.0 * spec_.lam2 * y;
}

double Solenoid::nu_prime(double x, double y) const {
  return spec_.nu0 + spec_.nu1 * std::cos(x) + spec_.nu2 * y;
}

double Solenoid::fiber_y(double x, double y) const {
  return (spec_.lam0 + spec_.lam1 * std::sin(x)) * y + spec_.lam2 * y * y + spec_.u_amp * std::cos(x);
}

double Solenoid::fiber_z(double x, double y, double z) const {
  return (spec_.nu0 + spec_.nu1 * std::cos(x)) * z + spec_.nu2 * y * z + spec_.v_amp * std::sin(x);
}

Interval Solenoid::eta_prime(Interval x) const {
  return spec_.eta_eps * cos(x) + static_cast<double>(spec_.d);
}

Interval Solenoid::lam_prime(Interval x, Interval y) const {
  return spec_.lam1 * sin(x) + (2.0 * spec_.lam2) * y + spec_.lam0;
}

Interval Solenoid::nu_prime(Interval x, Interval y) const {
  return spec_.nu1 * cos(x) + spec_.nu2 * y + spec_.nu0;
}

Interval Solenoid::fiber_y(Interval x, Interval y) const {
  const Interval slope = spec_.lam1 * sin(x) + spec_.lam0;
  return slope * y + spec_.lam2 * square(y) + spec_.u_amp * cos(x);
}

MapJet Solenoid::apply(const Point3& p) const {
  if (p.y * p.y + p.z * p.z > 1.0) throw PreconditionError("apply: point outside the solid torus");
  MapJet jet;
  jet.image = {eta(p.x), fiber_y(p.x, p.y), fiber_z(p.x, p.y, p.z)};
  jet.eta_p = eta_prime(p.x);
  jet.lam_p = lam_prime(p.x, p.y);
  jet.nu_p = nu_prime(p.x, p.y);
  jet.a_off = spec_.nu2 * p.z;
  const double r2 = jet.image.y * jet.image.y + jet.image.z * jet.image.z;
  if (!(r2 < 1.0)) {
    std::ostringstream os;
    os << "image of (" << p.x << ", " << p.y << ", " << p.z << ") has radius " << std::sqrt(r2);
    throw SpecInvalid("f(M) ⊂ M", os.str());
  }
  return jet;
}

Point3 Solenoid::iterate(Point3 p, int n) const {
  if (n < 0) throw PreconditionError("iterate: n must be non-negative");
  for (int k = 0; k < n; ++k) p = apply(p).image;
  return p;
}

double Solenoid::inverse_lift(double target) const {
  const double d = spec_.d;
  const double eps = std::abs(spec_.eta_eps);
  double lo = (target - eps) / d;
  double hi = (target + eps) / d;
  if (eps == 0.0) return target / d;
  double s = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double g = eta_lift(s) - target;
    if (g == 0.0) return s;
    if (g > 0.0) hi = s; else lo = s;
    double next = s - g / eta_prime(s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 1e-15 * std::max(1.0, std::abs(s)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(s))) return s;
  }
  throw SpecInvalid("η′ > 1", "inverse branch did not converge");
}

double Solenoid::inverse_base(double x, int branch) const {
  if (branch < 0 || branch >= spec_.d) throw PreconditionError("inverse_base: branch index out of range");
  return inverse_lift(wrap_angle(x) + kTwoPi * branch);
}

int Solenoid::branch_of(double x) const {
  x = wrap_angle(x);
  for (int i = 0; i < spec_.d; ++i)
    if (x <= branch_points_[i + 1]) return i;
  return spec_.d - 1;
}

}  // namespace solenoid
