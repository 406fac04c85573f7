// Euclidean projection onto the capped box {y in [0,1]^N : sum(y) <= C},
// the per-device feasible set of cache placements.
#pragma once

#include <span>
#include <vector>

namespace d2dcache {

struct ProjectionResult {
  std::vector<double> y;
  double theta = 0.0;              // optimal shift; 0 when input feasible
  bool saturated_capacity = false; // true when the capacity cut forced a shift
};

// argmin_{y in [0,1]^N, sum(y) <= C} ||y - v||_2. Clips to the box first;
// if the capacity constraint still binds, finds the smallest theta > 0 with
// sum_n clip(v_n - theta, 0, 1) = C by an O(N log N) breakpoint sweep.
// C > N is rejected.
ProjectionResult project_capped_box(std::span<const double> v, double capacity);

// In-place variant over a cache row; returns theta.
double project_capped_box_inplace(std::span<double> values, double capacity);

}  // namespace d2dcache
