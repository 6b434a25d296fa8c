#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "solenoid/interval.hpp"

namespace solenoid {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wraps an angle into [0, 2pi).
double wrap_angle(double x);

// Parametric description of one triangular map family member.
//   base:   x -> d x + eta_eps sin x            (mod 2pi)
//   y:      (lam0 + lam1 sin x) y + lam2 y^2 + u_amp cos x
//   z:      (nu0 + nu1 cos x) z + nu2 y z    + v_amp sin x
struct SolenoidSpec {
  int d = 2;
  double eta_eps = 0.0;
  double lam0 = 0.0;
  double lam1 = 0.0;
  double lam2 = 0.0;
  double nu0 = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  double u_amp = 0.0;
  double v_amp = 0.0;

  bool operator==(const SolenoidSpec&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Image of a point together with the entries of the differential.
struct MapJet {
  Point3 image;
  double eta_p = 0.0;
  double lam_p = 0.0;
  double nu_p = 0.0;
  double a_off = 0.0;  // d(nu)/dy, lower-left entry of the fiber differential
};

// Closed-form bounds over the closed solid torus (|y|, |z| <= 1).
struct DerivativeBounds {
  double eta_inf = 0.0;
  double eta_sup = 0.0;
  double lam_inf = 0.0;
  double lam_sup = 0.0;
  double nu_inf = 0.0;
  double nu_sup = 0.0;
  double off_sup = 0.0;
  // Operator-norm bound of the fiber differential; drives coding error bounds.
  double fiber_contraction = 0.0;
};

// Immutable map instance with cached branch points. Construction only checks
// what is needed for the base map to be a well-defined expanding covering
// (d >= 2, d - |eta_eps| > 1); the remaining hypotheses are the job of
// validate_spec.
class Solenoid {
 public:
  explicit Solenoid(const SolenoidSpec& spec);

  const SolenoidSpec& spec() const { return spec_; }
  int degree() const { return spec_.d; }
  const DerivativeBounds& bounds() const { return bounds_; }
  // a_0 = 0 < a_1 < ... < a_d = 2pi.
  std::span<const double> branch_points() const { return branch_points_; }

  double eta(double x) const { return wrap_angle(eta_lift(x)); }
  double eta_lift(double x) const;
  double eta_prime(double x) const;
  double lam_prime(double x, double y) const;
  double nu_prime(double x, double y) const;

  // Fiber part of the map at base angle x.
  double fiber_y(double x, double y) const;
  double fiber_z(double x, double y, double z) const;

  // Interval enclosures used by the cylinder bounds.
  Interval eta_prime(Interval x) const;
  Interval lam_prime(Interval x, Interval y) const;
  Interval nu_prime(Interval x, Interval y) const;
  Interval fiber_y(Interval x, Interval y) const;

  // Throws SpecInvalid when the image leaves the open solid torus.
  MapJet apply(const Point3& p) const;
  Point3 iterate(Point3 p, int n) const;

  // Unique real s with eta_lift(s) = target.
  double inverse_lift(double target) const;
  // Preimage of x inside branch interval [a_branch, a_branch+1].
  double inverse_base(double x, int branch) const;
  // Branch interval containing x; endpoint ties go to the lower index.
  int branch_of(double x) const;

 private:
  SolenoidSpec spec_;
  std::vector<double> branch_points_;
  DerivativeBounds bounds_;
};

}  // namespace solenoid
