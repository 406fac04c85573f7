// Best static cache configuration in hindsight: the regret benchmark.
// Aggregates a finished trace into per-(user, file) demand counts and
// minimizes the total service cost over the feasible set by projected
// subgradient descent, anchored by a brute-force grid oracle on small
// instances.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

struct DemandProfile {
  std::map<std::pair<int, int>, long> counts;  // (user, file) -> requests
  long total = 0;
};

DemandProfile aggregate(const Trace& trace);

// A demand profile priced under one fixed cost matrix. A run with dynamic
// link costs contributes one epoch per distinct matrix; the static case is
// a single epoch.
struct EpochDemand {
  Network net;
  DemandProfile profile;
};

// Total trace cost sum counts * f_{(i,n)}(y) across epochs.
double total_static_cost(const CacheState& y,
                         const std::vector<EpochDemand>& epochs);

struct BestStaticOptions {
  int max_iters = 40000;
  double tol = 1e-9;       // relative improvement per phase
  int phase_iters = 2000;  // iterations per restart phase
  double step_scale = 1.0;
};

struct BestStaticResult {
  CacheState placement;
  double total_cost = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Projected subgradient descent with diminishing steps a/sqrt(k), a scaled
// to diam(Y)/(c* sqrt(J*)), run in restart phases: each phase re-starts
// a/sqrt(k) from the best iterate so far with a halved, which trades the
// slow sqrt(k) tail for geometric step refinement. Returns the best iterate
// seen; the objective is convex (a mixture of routing LP values), so this
// approaches the global optimum. `converged` is false when max_iters ran
// out while still improving.
BestStaticResult best_static(const DemandProfile& profile, const Network& net,
                             const BestStaticOptions& opts = {});

BestStaticResult best_static_epochs(const std::vector<EpochDemand>& epochs,
                                    const BestStaticOptions& opts = {});

// Exhaustive grid search over the feasible set at the given resolution.
// Guarded to I*N <= 6 dimensions; test oracle only.
std::pair<CacheState, double> brute_force_static(const DemandProfile& profile,
                                                 const Network& net,
                                                 double grid_step);

}  // namespace d2dcache
