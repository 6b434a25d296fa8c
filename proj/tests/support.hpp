#pragma once

#include <string>

#include "solenoid/config.hpp"
#include "solenoid/solenoid_map.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(SOLENOID_FIXTURES) + "/" + name; }

// Benchmarks used throughout the suites.
inline solenoid::SolenoidSpec bench_a() { return {2, 0.0, 0.4, 0.0, 0.0, 0.25, 0.0, 0.0, 0.5, 0.5}; }
inline solenoid::SolenoidSpec bench_b() { return {2, 0.0, 0.4, 0.0, 0.0, 0.05, 0.0, 0.0, 0.5, 0.5}; }
inline solenoid::SolenoidSpec bench_c() { return {2, 0.3, 0.35, 0.05, 0.0, 0.15, 0.0, 0.0, 0.5, 0.5}; }
inline solenoid::SolenoidSpec bench_d3() { return {3, 0.0, 1.0 / 9.0, 0.0, 0.0, 0.05, 0.0, 0.0, 0.5, 0.5}; }
// u = 0: every leaf projects onto the same curve
inline solenoid::SolenoidSpec flat_u() { return {2, 0.0, 0.4, 0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 0.5}; }
// y-quadratic and z-coupled terms switched on
inline solenoid::SolenoidSpec bench_q() { return {2, 0.2, 0.25, 0.04, 0.05, 0.1, 0.02, 0.03, 0.4, 0.35}; }

}  // namespace testing_support
