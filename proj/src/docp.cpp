#include "d2dcache/docp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dcache/projection.hpp"

namespace d2dcache {

DocpParams DocpParams::from_network(const Network& net, long horizon,
                                    StepSchedule schedule) {
  DocpParams p;
  p.schedule = schedule;
  p.capacity_bound = net.max_capacity();
  p.neighborhood_bound = net.max_neighborhood_size();
  p.cost_bound = net.max_bs_cost();
  p.horizon = horizon;
  if (p.cost_bound <= 0.0)
    throw std::invalid_argument("step size needs a positive BS cost bound");
  return p;
}

double DocpParams::regret_bound() const {
  return cost_bound *
         std::sqrt(2.0 * capacity_bound * neighborhood_bound) *
         std::sqrt(static_cast<double>(horizon));
}

double step_size(const DocpState& state) {
  const DocpParams& p = state.params;
  if (p.gamma_override) return *p.gamma_override;
  const double numerator =
      std::sqrt(2.0 * p.capacity_bound * p.neighborhood_bound);
  switch (p.schedule) {
    case StepSchedule::constant_T:
      if (p.horizon <= 0)
        throw std::invalid_argument(
            "constant_T schedule needs a known horizon T");
      return numerator / (p.cost_bound * std::sqrt(double(p.horizon)));
    case StepSchedule::inverse_sqrt_t:
      return numerator / (p.cost_bound * std::sqrt(double(state.t)));
    case StepSchedule::doubling: {
      double epoch = 1.0;
      while (2.0 * epoch <= static_cast<double>(state.t)) epoch *= 2.0;
      return numerator / (p.cost_bound * std::sqrt(epoch));
    }
  }
  throw std::logic_error("unknown step schedule");
}

DocpStepResult docp_step(DocpState& state, const Request& req,
                         const Network& net) {
  if (req.slot != state.t)
    throw std::invalid_argument("request slot does not match policy clock");

  DocpStepResult result;
  result.gamma = step_size(state);
  result.plan = optimal_routing(req, state.cache, net);
  result.cost = result.plan.cost;

  for (const auto& [j, beta] : result.plan.dual_beta) {
    if (j == kBsNode || beta <= 0.0) continue;
    result.messages.push_back({req.user, j, req.file, beta});
    state.cache.add(j, req.file, result.gamma * beta);
    project_capped_box_inplace(state.cache.row(j), net.capacity(j));
  }
  state.t += 1;
  return result;
}

bool locality_audit(const std::vector<MultiplierMessage>& messages,
                    const CacheState& before, const CacheState& after,
                    const Request& req, const Network& net, double gamma) {
  constexpr double kTol = 1e-12;
  for (const auto& m : messages) {
    if (m.from != req.user || m.file != req.file) return false;
    if (m.to == kBsNode || !net.in_neighborhood(req.user, m.to)) return false;
  }
  for (int j = 1; j <= net.device_count(); ++j) {
    const auto before_row = before.row(j);
    const auto after_row = after.row(j);
    double beta = 0.0;
    for (const auto& m : messages)
      if (m.to == j) beta = m.beta;

    if (!net.in_neighborhood(req.user, j) || beta == 0.0) {
      // untouched row: must be bit-identical
      if (!std::equal(before_row.begin(), before_row.end(),
                      after_row.begin()))
        return false;
      continue;
    }
    // must equal the projected single-coordinate update
    std::vector<double> expect(before_row.begin(), before_row.end());
    expect[req.file] += gamma * beta;
    project_capped_box_inplace(expect, net.capacity(j));
    for (int n = 0; n < net.catalog_size(); ++n)
      if (std::abs(expect[n] - after_row[n]) > kTol) return false;
  }
  return true;
}

}  // namespace d2dcache
