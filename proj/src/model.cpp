#include "d2dcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2dcache {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Network::Network(int catalog_size, std::vector<int> capacities,
                 std::vector<std::vector<double>> cost, double absent_cost)
    : device_count_(static_cast<int>(capacities.size())),
      catalog_size_(catalog_size),
      capacities_(std::move(capacities)),
      cost_(std::move(cost)),
      absent_cost_(absent_cost) {
  validate();
  build_neighborhoods();
  max_bs_cost_ = 0.0;
  for (int i = 1; i <= device_count_; ++i)
    max_bs_cost_ = std::max(max_bs_cost_, bs_cost(i));
  max_capacity_ = *std::max_element(capacities_.begin(), capacities_.end());
  max_nbhd_size_ = 0;
  for (const auto& nb : neighborhoods_)
    max_nbhd_size_ = std::max(max_nbhd_size_, static_cast<int>(nb.size()));
}

void Network::validate() const {
  require(device_count_ >= 1, "network needs at least one device");
  require(catalog_size_ >= 1, "catalog must be nonempty");
  const std::size_t n = static_cast<std::size_t>(device_count_) + 1;
  require(cost_.size() == n, "cost matrix must be (I+1)x(I+1)");
  for (const auto& row : cost_)
    require(row.size() == n, "cost matrix must be square");
  require(absent_cost_ > 0.0, "absent-link sentinel must be positive");

  for (std::size_t i = 0; i < n; ++i) {
    require(cost_[i][i] == 0.0, "self cost c_ii must be 0");
    for (std::size_t j = 0; j < n; ++j)
      require(cost_[i][j] >= 0.0 && std::isfinite(cost_[i][j]),
              "link costs must be non-negative and finite");
  }
  for (int i = 1; i <= device_count_; ++i) {
    require(cost_[i][0] < absent_cost_ && cost_[0][i] < absent_cost_,
            "BS must be reachable by every device");
    for (int j = 1; j <= device_count_; ++j) {
      if (i == j) continue;
      if (cost_[i][j] < absent_cost_)
        require(cost_[i][j] < cost_[i][0],
                "live D2D link must be cheaper than the BS (c_i0 > c_ij)");
    }
  }
  for (int i = 0; i < device_count_; ++i) {
    require(capacities_[i] >= 0, "capacities must be non-negative");
    require(capacities_[i] < catalog_size_, "capacity must satisfy C_i < N");
  }
}

void Network::build_neighborhoods() {
  neighborhoods_.assign(device_count_ + 1, {});
  for (int i = 1; i <= device_count_; ++i) {
    std::vector<std::pair<double, int>> by_cost;
    for (int j = 0; j <= device_count_; ++j)
      if (cost_[i][j] < absent_cost_) by_cost.emplace_back(cost_[i][j], j);
    std::sort(by_cost.begin(), by_cost.end());
    auto& nb = neighborhoods_[i];
    nb.reserve(by_cost.size());
    for (const auto& [c, j] : by_cost) nb.push_back(j);
  }
}

int Network::capacity(int device) const {
  require(device >= 1 && device <= device_count_, "device id out of range");
  return capacities_[device - 1];
}

double Network::cost(int from_node, int to_node) const {
  require(from_node >= 0 && from_node <= device_count_ && to_node >= 0 &&
              to_node <= device_count_,
          "node id out of range");
  return cost_[from_node][to_node];
}

bool Network::link(int node_a, int node_b) const {
  return cost(node_a, node_b) < absent_cost_;
}

const std::vector<int>& Network::neighborhood(int device) const {
  require(device >= 1 && device <= device_count_, "device id out of range");
  return neighborhoods_[device];
}

bool Network::in_neighborhood(int device, int node) const {
  const auto& nb = neighborhood(device);
  return std::find(nb.begin(), nb.end(), node) != nb.end();
}

Network Network::with_cost(int from_node, int to_node, double new_cost) const {
  auto cost = cost_;
  require(from_node >= 0 && from_node <= device_count_ && to_node >= 0 &&
              to_node <= device_count_,
          "node id out of range");
  cost[from_node][to_node] = new_cost;
  return Network(catalog_size_, capacities_, std::move(cost), absent_cost_);
}

Network build_network(const std::vector<Point>& positions, double range_m,
                      const std::vector<CostBand>& cost_bands, double bs_cost,
                      int catalog_size, std::vector<int> capacities) {
  require(!positions.empty(), "positions must be nonempty");
  require(!cost_bands.empty(), "at least one cost band required");
  require(range_m > 0.0, "range must be positive");
  require(bs_cost > 0.0, "BS cost must be positive");
  for (std::size_t b = 0; b < cost_bands.size(); ++b) {
    require(cost_bands[b].cost >= 0.0, "band costs must be non-negative");
    require(cost_bands[b].cost < bs_cost,
            "band cost must be below the BS cost (c_i0 > c_ij)");
    if (b > 0)
      require(cost_bands[b].distance_upper_m > cost_bands[b - 1].distance_upper_m,
              "cost bands must be sorted by distance");
  }
  require(cost_bands.back().distance_upper_m >= range_m,
          "cost bands must cover the communication range");

  const int devices = static_cast<int>(positions.size());
  require(static_cast<int>(capacities.size()) == devices,
          "one capacity per device required");

  const double absent = 2.0 * bs_cost;
  std::vector<std::vector<double>> cost(
      devices + 1, std::vector<double>(devices + 1, absent));
  cost[0][0] = 0.0;
  for (int i = 1; i <= devices; ++i) {
    cost[i][i] = 0.0;
    cost[i][0] = bs_cost;
    cost[0][i] = bs_cost;
  }
  for (int i = 1; i <= devices; ++i) {
    for (int j = i + 1; j <= devices; ++j) {
      const double dx = positions[i - 1].x - positions[j - 1].x;
      const double dy = positions[i - 1].y - positions[j - 1].y;
      const double dist = std::hypot(dx, dy);
      if (dist > range_m) continue;
      double c = cost_bands.back().cost;  // last band is closed at its edge
      for (const auto& band : cost_bands) {
        if (dist < band.distance_upper_m) {
          c = band.cost;
          break;
        }
      }
      cost[i][j] = c;
      cost[j][i] = c;
    }
  }
  return Network(catalog_size, std::move(capacities), std::move(cost), absent);
}

CacheState::CacheState(int device_count, int catalog_size)
    : device_count_(device_count),
      catalog_size_(catalog_size),
      y_(static_cast<std::size_t>(device_count) * catalog_size, 0.0) {
  if (device_count < 1 || catalog_size < 1)
    throw std::invalid_argument("cache state needs positive dimensions");
}

CacheState CacheState::uniform(const Network& net) {
  CacheState y(net.device_count(), net.catalog_size());
  for (int i = 1; i <= net.device_count(); ++i) {
    const double v =
        static_cast<double>(net.capacity(i)) / net.catalog_size();
    for (int n = 0; n < net.catalog_size(); ++n) y.set(i, n, v);
  }
  return y;
}

std::size_t CacheState::index(int device, int file) const {
  if (device < 1 || device > device_count_ || file < 0 ||
      file >= catalog_size_)
    throw std::out_of_range("cache index out of range");
  return static_cast<std::size_t>(device - 1) * catalog_size_ + file;
}

std::span<double> CacheState::row(int device) {
  return std::span<double>(y_).subspan(index(device, 0), catalog_size_);
}

std::span<const double> CacheState::row(int device) const {
  return std::span<const double>(y_).subspan(index(device, 0), catalog_size_);
}

std::vector<double> CacheState::total_allocation() const {
  std::vector<double> total(catalog_size_, 0.0);
  for (int i = 1; i <= device_count_; ++i) {
    auto r = row(i);
    for (int n = 0; n < catalog_size_; ++n) total[n] += r[n];
  }
  return total;
}

CacheValidation validate_cache(const CacheState& y, const Network& net) {
  if (y.device_count() != net.device_count() ||
      y.catalog_size() != net.catalog_size())
    throw std::invalid_argument("cache dimensions do not match network");

  CacheValidation result;
  constexpr double kTol = 1e-9;
  for (int i = 1; i <= net.device_count(); ++i) {
    double sum = 0.0;
    bool box_ok = true;
    for (double v : y.row(i)) {
      sum += v;
      if (v < -kTol || v > 1.0 + kTol) box_ok = false;
    }
    if (!box_ok)
      result.violations.push_back("device " + std::to_string(i) +
                                  ": entry outside [0,1]");
    if (sum > net.capacity(i) + kTol)
      result.violations.push_back("device " + std::to_string(i) +
                                  ": cached mass exceeds capacity");
  }
  result.ok = result.violations.empty();
  return result;
}

double RoutingPlan::share_of(int node) const {
  for (const auto& [j, z] : shares)
    if (j == node) return z;
  return 0.0;
}

double RoutingPlan::beta_of(int node) const {
  for (const auto& [j, b] : dual_beta)
    if (j == node) return b;
  return 0.0;
}

void Trace::validate(const Network& net) const {
  long expected = 1;
  for (const auto& r : requests) {
    if (r.slot != expected)
      throw std::invalid_argument("trace slots must run 1..T by steps of 1");
    if (r.user < 1 || r.user > net.device_count())
      throw std::invalid_argument("trace user out of range at slot " +
                                  std::to_string(r.slot));
    if (r.file < 0 || r.file >= net.catalog_size())
      throw std::invalid_argument("trace file out of range at slot " +
                                  std::to_string(r.slot));
    ++expected;
  }
}

Trace Trace::prefix(long slots) const {
  Trace out;
  slots = std::min<long>(slots, horizon());
  out.requests.assign(requests.begin(), requests.begin() + slots);
  return out;
}

}  // namespace d2dcache
