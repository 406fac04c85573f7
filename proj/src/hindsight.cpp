#include "d2dcache/hindsight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "d2dcache/projection.hpp"
#include "d2dcache/routing.hpp"

namespace d2dcache {

DemandProfile aggregate(const Trace& trace) {
  DemandProfile profile;
  for (const auto& r : trace.requests) {
    profile.counts[{r.user, r.file}] += 1;
    profile.total += 1;
  }
  return profile;
}

double total_static_cost(const CacheState& y,
                         const std::vector<EpochDemand>& epochs) {
  double total = 0.0;
  for (const auto& epoch : epochs)
    for (const auto& [key, count] : epoch.profile.counts)
      total += count * service_cost(Request{1, key.first, key.second}, y,
                                    epoch.net);
  return total;
}

BestStaticResult best_static_epochs(const std::vector<EpochDemand>& epochs,
                                    const BestStaticOptions& opts) {
  if (epochs.empty()) throw std::invalid_argument("no demand epochs given");
  const Network& net0 = epochs.front().net;
  long total_count = 0;
  for (const auto& e : epochs) {
    total_count += e.profile.total;
    if (e.net.device_count() != net0.device_count() ||
        e.net.catalog_size() != net0.catalog_size())
      throw std::invalid_argument("epochs disagree on network dimensions");
  }
  if (total_count == 0)
    throw std::invalid_argument("demand profile is empty");

  const int devices = net0.device_count();
  const int files = net0.catalog_size();

  // diminishing step a/sqrt(k), a from the feasible set's diameter and the
  // c* sqrt(J*) subgradient bound
  double diam_sq = 0.0;
  for (int i = 1; i <= devices; ++i)
    diam_sq += std::min(2.0 * net0.capacity(i), double(files));
  double grad_bound = 0.0;
  for (const auto& e : epochs)
    grad_bound = std::max(
        e.net.max_bs_cost() * std::sqrt(double(e.net.max_neighborhood_size())),
        grad_bound);
  const double base_step =
      opts.step_scale * std::sqrt(diam_sq) / std::max(grad_bound, 1e-12);

  CacheState y = CacheState::uniform(net0);
  BestStaticResult best{y, total_static_cost(y, epochs), false, 0};

  std::vector<double> grad(static_cast<std::size_t>(devices) * files);
  double scale = 1.0;
  int stalled_phases = 0;
  while (best.iterations < opts.max_iters) {
    const double phase_start_cost = best.total_cost;
    const int phase_len =
        std::min(opts.phase_iters, opts.max_iters - best.iterations);
    for (int k = 1; k <= phase_len; ++k) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double value = 0.0;
      for (const auto& e : epochs) {
        for (const auto& [key, count] : e.profile.counts) {
          const double w = static_cast<double>(count) / total_count;
          value +=
              w * accumulate_cost_and_subgradient(
                      Request{1, key.first, key.second}, y, e.net, w, grad);
        }
      }
      if (value * total_count < best.total_cost) {
        best.total_cost = value * total_count;
        best.placement = y;
      }

      const double eta = base_step * scale / std::sqrt(double(k));
      auto flat = y.flat();
      for (std::size_t idx = 0; idx < flat.size(); ++idx)
        flat[idx] -= eta * grad[idx];
      for (int i = 1; i <= devices; ++i)
        project_capped_box_inplace(y.row(i), net0.capacity(i));
      best.iterations += 1;
    }

    const double rel = (phase_start_cost - best.total_cost) /
                       std::max(1.0, phase_start_cost);
    stalled_phases = rel < opts.tol ? stalled_phases + 1 : 0;
    if (stalled_phases >= 2) {
      best.converged = true;
      break;
    }
    // next phase: halve the step and restart from the incumbent
    scale *= 0.5;
    y = best.placement;
  }
  return best;
}

BestStaticResult best_static(const DemandProfile& profile, const Network& net,
                             const BestStaticOptions& opts) {
  std::vector<EpochDemand> epochs;
  epochs.push_back({net, profile});
  return best_static_epochs(epochs, opts);
}

namespace {

// Feasible grid values for one device row: recursion over files with the
// remaining capacity tracked.
void grid_search_row(const DemandProfile& profile, const Network& net,
                     double grid_step, CacheState& y, int device, int file,
                     double row_sum, double& best_cost, CacheState& best_y) {
  const int devices = net.device_count();
  const int files = net.catalog_size();
  if (device > devices) {
    std::vector<EpochDemand> single;
    single.push_back({net, profile});
    const double cost = total_static_cost(y, single);
    if (cost < best_cost) {
      best_cost = cost;
      best_y = y;
    }
    return;
  }
  if (file == files) {
    grid_search_row(profile, net, grid_step, y, device + 1, 0, 0.0, best_cost,
                    best_y);
    return;
  }
  const double cap = net.capacity(device);
  for (double v = 0.0; v <= 1.0 + 1e-12; v += grid_step) {
    const double value = std::min(v, 1.0);
    if (row_sum + value > cap + 1e-12) break;  // infeasible grid points skipped
    y.set(device, file, value);
    grid_search_row(profile, net, grid_step, y, device, file + 1,
                    row_sum + value, best_cost, best_y);
  }
  y.set(device, file, 0.0);
}

}  // namespace

std::pair<CacheState, double> brute_force_static(const DemandProfile& profile,
                                                 const Network& net,
                                                 double grid_step) {
  const long dims =
      static_cast<long>(net.device_count()) * net.catalog_size();
  if (dims > 6)
    throw std::invalid_argument("brute force limited to I*N <= 6 dimensions");
  if (grid_step <= 0.0 || grid_step > 1.0)
    throw std::invalid_argument("grid step must be in (0, 1]");

  CacheState y(net.device_count(), net.catalog_size());
  CacheState best_y = y;
  double best_cost = std::numeric_limits<double>::infinity();
  grid_search_row(profile, net, grid_step, y, 1, 0, 0.0, best_cost, best_y);
  return {best_y, best_cost};
}

}  // namespace d2dcache
