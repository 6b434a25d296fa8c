#pragma once

#include <span>

#include "solenoid/parallel.hpp"
#include "solenoid/solenoid_map.hpp"

namespace solenoid::detail {

// y and z of every generation-n representative over lift x_lift, in
// word_index order. Matches leaf_point bit for bit.
void fill_slice(const Solenoid& sol, double x_lift, int n, std::span<double> ys, std::span<double> zs,
                ParallelOptions par);

}  // namespace solenoid::detail
