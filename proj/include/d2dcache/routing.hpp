// Per-slot service cost: solves the one-request routing LP
//
//   min sum_j c_{i_t j} z_j   s.t.  sum_j z_j = 1,  0 <= z_j <= y^{n_t, j}
//
// over the requester's neighborhood (BS uncapped), in closed greedy form,
// and exposes the optimal dual multipliers that drive the cache updates.
#pragma once

#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

// Subgradient of the service cost at y: value -beta*_j at (device j, file
// n_t) for the requester's neighbors, zero elsewhere. Only nonzero entries
// are stored; the BS carries no cache coordinate.
struct SparseGradient {
  int file = 0;
  std::vector<std::pair<int, double>> entries;  // (device, value <= 0)

  double value_at(int device, int file_id) const;
  // g . (a - b) for cache states a, b.
  double dot_diff(const CacheState& a, const CacheState& b) const;
};

// Greedy fill in ascending link cost (requester itself first at cost 0),
// BS absorbing the remainder. The dual certificate is alpha* = cost of the
// marginal source and beta*_j = max(alpha* - c_{i_t j}, 0); on degenerate
// boundaries alpha* is the cost of the last source actually used, the
// smallest valid multiplier.
RoutingPlan optimal_routing(const Request& req, const CacheState& y,
                            const Network& net);

// Cost of the optimal plan, without building it.
double service_cost(const Request& req, const CacheState& y,
                    const Network& net);

SparseGradient subgradient(const Request& req, const CacheState& y,
                           const Network& net);

// Adds weight * g(y) into a dense I x N gradient (row-major, device-major)
// and returns the service cost. One pass shared by batch solvers.
double accumulate_cost_and_subgradient(const Request& req, const CacheState& y,
                                       const Network& net, double weight,
                                       std::vector<double>& grad);

// Independent correctness oracle for small instances (|J(i_t)| <= 12):
// the primal by enumerating LP vertex solutions, the duals by maximizing
// the dual objective over its candidate breakpoints. Shares no code with
// the greedy path; used to validate it.
RoutingPlan lp_oracle_routing(const Request& req, const CacheState& y,
                              const Network& net);

}  // namespace d2dcache
