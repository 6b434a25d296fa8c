#include "solenoid/validation.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

struct Tracker {
  HypothesisCheck check;
  double worst = std::numeric_limits<double>::infinity();
  Point3 at{};

  explicit Tracker(std::string name) { check.name = std::move(name); }

  void observe(double slack, const Point3& p) {
    if (slack < worst) {
      worst = slack;
      at = p;
    }
  }

  HypothesisCheck finish() {
    check.worst_value = worst;
    check.passed = worst > 0.0;
    if (!check.passed) check.witness = at;
    return check;
  }
};

struct DiscSample {
  double y;
  double z;
};

std::vector<DiscSample> disc_grid(int density) {
  std::vector<DiscSample> out{{0.0, 0.0}};
  const int angles = 4 * density;
  for (int j = 1; j <= density; ++j) {
    const double r = static_cast<double>(j) / density;
    for (int a = 0; a < angles; ++a) {
      const double th = kTwoPi * a / angles;
      out.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return out;
}

}  // namespace

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const HypothesisCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

ValidationReport validate_spec(const SolenoidSpec& spec, int grid_density) {
  if (grid_density < 16) throw PreconditionError("validate_spec: grid_density must be at least 16");

  ValidationReport report;
  report.grid_density = grid_density;
  report.note =
      "hypotheses checked on a finite grid; injectivity is a sampled sufficient condition "
      "(branch image separation per fiber), not a proof";

  const int nx = 4 * grid_density;
  const auto disc = disc_grid(grid_density);

  // Closed-form pieces that do not need the cached branch points.
  auto eta_p = [&](double x) { return spec.d + spec.eta_eps * std::cos(x); };
  auto lam_p = [&](double x, double y) { return spec.lam0 + spec.lam1 * std::sin(x) + 2.0 * spec.lam2 * y; };
  auto nu_p = [&](double x, double y) { return spec.nu0 + spec.nu1 * std::cos(x) + spec.nu2 * y; };
  auto img_y = [&](double x, double y) {
    return (spec.lam0 + spec.lam1 * std::sin(x)) * y + spec.lam2 * y * y + spec.u_amp * std::cos(x);
  };
  auto img_z = [&](double x, double y, double z) {
    return (spec.nu0 + spec.nu1 * std::cos(x)) * z + spec.nu2 * y * z + spec.v_amp * std::sin(x);
  };

  Tracker expanding("η′ > 1");
  Tracker nu_pos("0 < ν′");
  Tracker nu_lam("ν′ < λ′");
  Tracker lam_one("λ′ < 1");
  Tracker lam_eta("λ′ < 1/η′");
  Tracker into("f(M) ⊂ M");
  Tracker injective("injectivity");

  for (int k = 0; k < nx; ++k) {
    const double x = kTwoPi * k / nx;
    const double e = eta_p(x);
    expanding.observe(e - 1.0, {x, 0.0, 0.0});
    for (const auto& s : disc) {
      const Point3 p{x, s.y, s.z};
      const double l = lam_p(x, s.y);
      const double v = nu_p(x, s.y);
      nu_pos.observe(v, p);
      nu_lam.observe(l - v, p);
      lam_one.observe(1.0 - l, p);
      lam_eta.observe(1.0 / e - l, p);
      const double iy = img_y(x, s.y);
      const double iz = img_z(x, s.y, s.z);
      into.observe(1.0 - std::sqrt(iy * iy + iz * iz), p);
    }
  }

  std::unique_ptr<Solenoid> sol;
  try {
    sol = std::make_unique<Solenoid>(spec);
  } catch (const SpecInvalid&) {
  }

  if (sol) {
    const int d = spec.d;
    std::vector<DiscSample> centers(d);
    std::vector<double> extent(d);
    for (int k = 0; k < nx; ++k) {
      const double x = kTwoPi * k / nx;
      for (int i = 0; i < d; ++i) {
        const double xi = sol->inverse_base(x, i);
        const DiscSample c{img_y(xi, 0.0), img_z(xi, 0.0, 0.0)};
        double ext = 0.0;
        for (const auto& s : disc) {
          const double dy = img_y(xi, s.y) - c.y;
          const double dz = img_z(xi, s.y, s.z) - c.z;
          ext = std::max(ext, std::hypot(dy, dz));
        }
        centers[i] = c;
        extent[i] = ext;
      }
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          const double gap = std::hypot(centers[i].y - centers[j].y, centers[i].z - centers[j].z);
          injective.observe(gap - extent[i] - extent[j], {x, centers[i].y, centers[i].z});
        }
    }
  } else {
    injective.observe(-std::numeric_limits<double>::infinity(), {0.0, 0.0, 0.0});
  }

  report.checks = {expanding.finish(), nu_pos.finish(), nu_lam.finish(), lam_one.finish(),
                   lam_eta.finish(),   into.finish(),   injective.finish()};
  return report;
}

void require_valid(const ValidationReport& report) {
  if (const auto* f = report.first_failure()) {
    std::string detail;
    if (f->witness) {
      detail = "witness x=" + std::to_string(f->witness->x) + " y=" + std::to_string(f->witness->y) +
               " z=" + std::to_string(f->witness->z);
    }
    throw SpecInvalid(f->name, detail);
  }
}

}  // namespace solenoid
