// Distributed online caching policy: per slot, the requester solves the
// routing LP, sends the optimal multipliers beta*_j to its 1-hop neighbors,
// and each neighbor takes a projected gradient step on the requested file's
// coordinate of its own cache row.
#pragma once

#include <optional>
#include <vector>

#include "d2dcache/model.hpp"
#include "d2dcache/routing.hpp"

namespace d2dcache {

enum class StepSchedule { constant_T, inverse_sqrt_t, doubling };

struct DocpParams {
  StepSchedule schedule = StepSchedule::constant_T;
  double capacity_bound = 0.0;      // C  = max_i C_i
  double neighborhood_bound = 0.0;  // J* = max_i |J(i)|
  double cost_bound = 0.0;          // c* = max_i c_{i0}
  long horizon = 0;                 // T, needed by constant_T
  std::optional<double> gamma_override;

  static DocpParams from_network(const Network& net, long horizon,
                                 StepSchedule schedule);
  // Theorem step: c* sqrt(2 C J*) sqrt(T), the hard regret guarantee.
  double regret_bound() const;
};

struct DocpState {
  CacheState cache;
  DocpParams params;
  long t = 1;  // slot of the next request

  DocpState(CacheState initial, DocpParams p)
      : cache(std::move(initial)), params(p) {}
};

struct MultiplierMessage {
  int from = 0;
  int to = 0;  // a device in J(from); never the BS
  int file = 0;
  double beta = 0.0;
};

// gamma for the state's current slot. constant_T: sqrt(2 C J*)/(c* sqrt(T));
// inverse_sqrt_t swaps sqrt(T) for sqrt(t); doubling re-evaluates the
// constant_T formula with T = 2^k on epochs [2^k, 2^{k+1}).
double step_size(const DocpState& state);

struct DocpStepResult {
  double cost = 0.0;       // accrued on the pre-update cache
  RoutingPlan plan;
  std::vector<MultiplierMessage> messages;  // zero-beta messages suppressed
  double gamma = 0.0;
};

// One slot of Algorithm DOCP. Serves the request on the current cache,
// then lets every neighborhood member j apply y^{j,n_t} += gamma beta*_j
// followed by the projection of its own row. Devices outside J(i_t) are
// untouched. Requires req.slot == state.t.
DocpStepResult docp_step(DocpState& state, const Request& req,
                         const Network& net);

// Checks that a step stayed local: every message targets J(i_t), rows
// outside J(i_t) are unchanged, and each neighborhood row equals the
// projected n_t-coordinate update implied by its message (identity when no
// message was sent). gamma must be the step size the update used.
bool locality_audit(const std::vector<MultiplierMessage>& messages,
                    const CacheState& before, const CacheState& after,
                    const Request& req, const Network& net, double gamma);

}  // namespace d2dcache
