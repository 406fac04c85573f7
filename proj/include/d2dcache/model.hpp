// Core domain types for a BS-assisted D2D caching network: the static
// network (link costs, capacities), fractional cache placements, requests,
// routing plans and request traces.
//
// Node indexing convention used throughout: node 0 is the base station,
// devices are nodes 1..I. Files are 0-based (0..N-1).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace d2dcache {

constexpr int kBsNode = 0;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One (distance_upper_m, cost) band of the distance-to-cost map. A D2D link
// at distance d gets the cost of the first band with d < upper (the last
// band is closed at its upper edge, so d == range is still linked).
struct CostBand {
  double distance_upper_m = 0.0;
  double cost = 0.0;
};

class Network {
 public:
  // cost is an (I+1)x(I+1) node-indexed matrix, row/col 0 = BS. Entries at
  // or above absent_cost mark missing links. Throws std::invalid_argument
  // when an invariant fails (see validate() for the list).
  Network(int catalog_size, std::vector<int> capacities,
          std::vector<std::vector<double>> cost, double absent_cost);

  int device_count() const { return device_count_; }
  int catalog_size() const { return catalog_size_; }
  int capacity(int device) const;
  const std::vector<int>& capacities() const { return capacities_; }

  double cost(int from_node, int to_node) const;
  double bs_cost(int device) const { return cost(device, kBsNode); }
  double absent_cost() const { return absent_cost_; }
  bool link(int node_a, int node_b) const;  // adjacency: cost < absent_cost

  // J(i): nodes device i can source from, self and BS included, sorted by
  // ascending (cost, node id). The BS is always a member.
  const std::vector<int>& neighborhood(int device) const;
  bool in_neighborhood(int device, int node) const;

  double max_bs_cost() const { return max_bs_cost_; }          // c*
  int max_capacity() const { return max_capacity_; }           // C
  int max_neighborhood_size() const { return max_nbhd_size_; } // J*

  // Same topology with one directed link cost replaced. Used by dynamic
  // cost schedules.
  Network with_cost(int from_node, int to_node, double new_cost) const;

 private:
  void validate() const;
  void build_neighborhoods();

  int device_count_ = 0;
  int catalog_size_ = 0;
  std::vector<int> capacities_;
  std::vector<std::vector<double>> cost_;
  double absent_cost_ = 0.0;
  std::vector<std::vector<int>> neighborhoods_;
  double max_bs_cost_ = 0.0;
  int max_capacity_ = 0;
  int max_nbhd_size_ = 0;
};

// Geometry-to-cost construction: devices at the given positions, D2D links
// within range_m priced by the first matching band, everything else absent.
// The BS reaches every device at bs_cost. Bands must be sorted, cover
// range_m, and stay strictly below bs_cost.
Network build_network(const std::vector<Point>& positions, double range_m,
                      const std::vector<CostBand>& cost_bands, double bs_cost,
                      int catalog_size, std::vector<int> capacities);

// Fractional per-device cache placement y[i][n] in [0,1], one row per device.
class CacheState {
 public:
  CacheState(int device_count, int catalog_size);  // all zeros
  static CacheState uniform(const Network& net);   // y = C_i / N everywhere

  int device_count() const { return device_count_; }
  int catalog_size() const { return catalog_size_; }

  double at(int device, int file) const { return y_[index(device, file)]; }
  void set(int device, int file, double v) { y_[index(device, file)] = v; }
  void add(int device, int file, double v) { y_[index(device, file)] += v; }

  std::span<double> row(int device);
  std::span<const double> row(int device) const;
  std::span<const double> flat() const { return y_; }
  std::span<double> flat() { return y_; }

  // Total fraction of each file cached across all devices (length N).
  std::vector<double> total_allocation() const;

  bool operator==(const CacheState&) const = default;

 private:
  std::size_t index(int device, int file) const;
  int device_count_ = 0;
  int catalog_size_ = 0;
  std::vector<double> y_;
};

struct CacheValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks the eligibility set: 0 <= y <= 1 elementwise and row sums within
// capacity. Violations name the offending device and constraint. Dimension
// mismatch with the network throws.
CacheValidation validate_cache(const CacheState& y, const Network& net);

struct Request {
  long slot = 0;  // 1-based
  int user = 0;   // device node id, 1..I
  int file = 0;   // 0..N-1
};

// Fractional sourcing of one request across the requester's neighborhood,
// with the optimal dual certificate of the routing LP attached.
struct RoutingPlan {
  // (source node, share) over J(i_t) in ascending (cost, node) order; shares
  // sum to 1, zero shares included.
  std::vector<std::pair<int, double>> shares;
  double cost = 0.0;
  double dual_alpha = 0.0;
  // (source node, beta) for every source in J(i_t); the BS entry is always 0.
  std::vector<std::pair<int, double>> dual_beta;

  double share_of(int node) const;
  double beta_of(int node) const;
};

struct Trace {
  std::vector<Request> requests;  // slots 1..T in order

  long horizon() const { return static_cast<long>(requests.size()); }
  // Slots must run 1..T incrementing by 1; users/files must be in range.
  void validate(const Network& net) const;
  Trace prefix(long slots) const;
};

}  // namespace d2dcache
