#include "d2dcache/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2dcache {

namespace {

void check_request(const Request& req, const CacheState& y,
                   const Network& net) {
  if (req.user < 1 || req.user > net.device_count())
    throw std::invalid_argument("request user out of range");
  if (req.file < 0 || req.file >= net.catalog_size())
    throw std::invalid_argument("request file out of range");
  if (y.device_count() != net.device_count() ||
      y.catalog_size() != net.catalog_size())
    throw std::invalid_argument("cache dimensions do not match network");
}

double supply_of(int node, const Request& req, const CacheState& y) {
  return node == kBsNode ? 1.0 : y.at(node, req.file);
}

}  // namespace

double SparseGradient::value_at(int device, int file_id) const {
  if (file_id != file) return 0.0;
  for (const auto& [d, v] : entries)
    if (d == device) return v;
  return 0.0;
}

double SparseGradient::dot_diff(const CacheState& a, const CacheState& b) const {
  double acc = 0.0;
  for (const auto& [d, v] : entries)
    acc += v * (a.at(d, file) - b.at(d, file));
  return acc;
}

RoutingPlan optimal_routing(const Request& req, const CacheState& y,
                            const Network& net) {
  check_request(req, y, net);
  const auto& sources = net.neighborhood(req.user);

  RoutingPlan plan;
  plan.shares.reserve(sources.size());
  double remaining = 1.0;
  double marginal_cost = 0.0;  // cost of the last source with z > 0
  for (int j : sources) {
    const double c = net.cost(req.user, j);
    const double take = std::min(remaining, supply_of(j, req, y));
    if (take > 0.0) {
      plan.cost += c * take;
      remaining -= take;
      marginal_cost = c;
    }
    plan.shares.emplace_back(j, take);
  }
  // the BS supply is 1, so remaining always reaches 0 by the end
  plan.dual_alpha = marginal_cost;
  plan.dual_beta.reserve(sources.size());
  for (int j : sources) {
    const double b =
        j == kBsNode
            ? 0.0
            : std::max(plan.dual_alpha - net.cost(req.user, j), 0.0);
    plan.dual_beta.emplace_back(j, b);
  }
  return plan;
}

double service_cost(const Request& req, const CacheState& y,
                    const Network& net) {
  check_request(req, y, net);
  double cost = 0.0;
  double remaining = 1.0;
  for (int j : net.neighborhood(req.user)) {
    const double take = std::min(remaining, supply_of(j, req, y));
    cost += net.cost(req.user, j) * take;
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return cost;
}

SparseGradient subgradient(const Request& req, const CacheState& y,
                           const Network& net) {
  const RoutingPlan plan = optimal_routing(req, y, net);
  SparseGradient g;
  g.file = req.file;
  for (const auto& [j, beta] : plan.dual_beta)
    if (j != kBsNode && beta > 0.0) g.entries.emplace_back(j, -beta);
  return g;
}

double accumulate_cost_and_subgradient(const Request& req, const CacheState& y,
                                       const Network& net, double weight,
                                       std::vector<double>& grad) {
  check_request(req, y, net);
  const int files = net.catalog_size();
  double cost = 0.0;
  double remaining = 1.0;
  double marginal_cost = 0.0;
  const auto& sources = net.neighborhood(req.user);
  for (int j : sources) {
    const double take = std::min(remaining, supply_of(j, req, y));
    if (take > 0.0) {
      cost += net.cost(req.user, j) * take;
      remaining -= take;
      marginal_cost = net.cost(req.user, j);
    }
  }
  for (int j : sources) {
    if (j == kBsNode) continue;
    const double beta = marginal_cost - net.cost(req.user, j);
    if (beta > 0.0)
      grad[static_cast<std::size_t>(j - 1) * files + req.file] -=
          weight * beta;
  }
  return cost;
}

RoutingPlan lp_oracle_routing(const Request& req, const CacheState& y,
                              const Network& net) {
  check_request(req, y, net);
  const auto& sources = net.neighborhood(req.user);
  const int m = static_cast<int>(sources.size());
  if (m > 12)
    throw std::invalid_argument("lp oracle limited to 12 sources");

  std::vector<double> cost(m), cap(m);
  for (int k = 0; k < m; ++k) {
    cost[k] = net.cost(req.user, sources[k]);
    cap[k] = supply_of(sources[k], req, y);
  }

  // Primal: with a single equality constraint, every LP vertex has at most
  // one variable strictly between its bounds. Enumerate which variable is
  // fractional and which of the rest sit at their upper bound.
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_z(m, 0.0);
  std::vector<double> z(m);
  for (int frac = 0; frac < m; ++frac) {
    for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
      double taken = 0.0;
      double val = 0.0;
      int bit = 0;
      for (int k = 0; k < m; ++k) {
        if (k == frac) continue;
        const bool upper = (mask >> bit++) & 1u;
        z[k] = upper ? cap[k] : 0.0;
        taken += z[k];
        val += cost[k] * z[k];
      }
      const double rest = 1.0 - taken;
      if (rest < -1e-12 || rest > cap[frac] + 1e-12) continue;
      z[frac] = std::clamp(rest, 0.0, cap[frac]);
      val += cost[frac] * z[frac];
      if (val < best - 1e-15) {
        best = val;
        best_z = z;
      }
    }
  }
  if (!std::isfinite(best))
    throw std::logic_error("routing LP infeasible despite BS fallback");

  // Dual: maximize alpha - sum_j (alpha - c_j)+ * cap_j over the candidate
  // breakpoints alpha in {c_j}; the objective is concave piecewise linear,
  // ties resolved toward the smallest alpha.
  double best_alpha = 0.0;
  double best_dual = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {  // costs ascend, so ties keep the smallest
    const double alpha = cost[k];
    double obj = alpha;
    for (int l = 0; l < m; ++l)
      obj -= std::max(alpha - cost[l], 0.0) * cap[l];
    if (obj > best_dual + 1e-12) {
      best_dual = obj;
      best_alpha = alpha;
    }
  }

  RoutingPlan plan;
  plan.cost = best;
  plan.dual_alpha = best_alpha;
  for (int k = 0; k < m; ++k) {
    plan.shares.emplace_back(sources[k], best_z[k]);
    plan.dual_beta.emplace_back(
        sources[k], sources[k] == kBsNode
                        ? 0.0
                        : std::max(best_alpha - cost[k], 0.0));
  }
  return plan;
}

}  // namespace d2dcache
