#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solenoid/solenoid_map.hpp"

namespace solenoid {

struct HypothesisCheck {
  std::string name;  // e.g. "ν′ < λ′"
  bool passed = true;
  std::optional<Point3> witness;  // first grid point that violates it
  double worst_value = 0.0;       // signed slack at the worst grid point (> 0 means satisfied)
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  int grid_density = 0;
  std::string note;

  bool ok() const;
  // nullptr when every hypothesis passed.
  const HypothesisCheck* first_failure() const;
};

// Grid check of the structural hypotheses. Failures are entries of the
// report, never exceptions (except for a grid below 16).
ValidationReport validate_spec(const SolenoidSpec& spec, int grid_density = 16);

// Throws SpecInvalid naming the first failed hypothesis.
void require_valid(const ValidationReport& report);

}  // namespace solenoid
