// Shared fixtures: hand-built star networks, random instances and random
// feasible caches for property tests.
#pragma once

#include <random>
#include <vector>

#include "d2dcache/model.hpp"
#include "d2dcache/projection.hpp"

namespace testsupport {

using d2dcache::CacheState;
using d2dcache::Network;

// Star around device 1: device 1 linked to devices 2..k+1 at the given
// costs, neighbors not linked to each other, every BS link at bs_cost.
inline Network star_network(const std::vector<double>& neighbor_costs,
                            double bs_cost, int catalog_size, int capacity) {
  const int devices = 1 + static_cast<int>(neighbor_costs.size());
  const double absent = 2.0 * bs_cost;
  std::vector<std::vector<double>> cost(
      devices + 1, std::vector<double>(devices + 1, absent));
  for (int i = 0; i <= devices; ++i) cost[i][i] = 0.0;
  for (int i = 1; i <= devices; ++i) {
    cost[i][0] = bs_cost;
    cost[0][i] = bs_cost;
  }
  for (std::size_t k = 0; k < neighbor_costs.size(); ++k) {
    cost[1][2 + k] = neighbor_costs[k];
    cost[2 + k][1] = neighbor_costs[k];
  }
  return Network(catalog_size, std::vector<int>(devices, capacity),
                 std::move(cost), absent);
}

inline double uniform(std::mt19937& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random connected-ish network: each D2D pair linked with probability
// link_prob at a cost below bs_cost.
inline Network random_network(std::mt19937& rng, int devices, int catalog,
                              int capacity, double bs_cost = 10.0,
                              double link_prob = 0.7) {
  const double absent = 2.0 * bs_cost;
  std::vector<std::vector<double>> cost(
      devices + 1, std::vector<double>(devices + 1, absent));
  for (int i = 0; i <= devices; ++i) cost[i][i] = 0.0;
  for (int i = 1; i <= devices; ++i) {
    cost[i][0] = bs_cost;
    cost[0][i] = bs_cost;
  }
  for (int i = 1; i <= devices; ++i)
    for (int j = i + 1; j <= devices; ++j)
      if (uniform(rng) < link_prob) {
        const double c = uniform(rng, 0.5, bs_cost - 0.5);
        cost[i][j] = c;
        cost[j][i] = c;
      }
  return Network(catalog, std::vector<int>(devices, capacity),
                 std::move(cost), absent);
}

inline CacheState random_feasible_cache(std::mt19937& rng,
                                        const Network& net) {
  CacheState y(net.device_count(), net.catalog_size());
  for (int i = 1; i <= net.device_count(); ++i) {
    for (int n = 0; n < net.catalog_size(); ++n)
      y.set(i, n, uniform(rng, 0.0, 1.2));
    d2dcache::project_capped_box_inplace(y.row(i), net.capacity(i));
  }
  return y;
}

}  // namespace testsupport
