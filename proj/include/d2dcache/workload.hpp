// Request-trace generators (i.i.d. Zipf, shifting Zipf, an oblivious
// adversarial rotation, file replay) and slot-indexed link-cost schedules.
// All generators are deterministic in their seed.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

enum class TraceKind { zipf_iid, shifting_zipf, adversarial_cyclic, replay };

struct GeneratorSpec {
  TraceKind kind = TraceKind::zipf_iid;
  long horizon = 0;              // T
  double zipf_exponent = 0.9;    // must be > 0
  std::vector<double> user_weights;  // empty = uniform over devices
  long shift_period = 0;         // W, shifting_zipf only
  std::uint64_t seed = 0;
  std::string trace_file;        // replay only
};

// Normalized Zipf pmf over N ranks: P(rank k) proportional to 1/(k+1)^s for
// 0-based k.
std::vector<double> zipf_weights(int catalog_size, double exponent);

// For adversarial_cyclic the generator may probe the policy's *initial*
// placement only (it stays causal); pass it as initial_probe.
Trace generate_trace(const GeneratorSpec& spec, const Network& net,
                     const CacheState* initial_probe = nullptr);

struct CostOverride {
  long slot = 0;  // takes effect at this slot and persists
  int from_node = 0;
  int to_node = 0;
  double cost = 0.0;
};

struct CostSchedule {
  std::vector<CostOverride> overrides;  // sorted by slot

  bool empty() const { return overrides.empty(); }
  void validate(const Network& net) const;
};

// Network view for slot t: all overrides with slot <= t applied in order.
// Setting a link to the absent sentinel severs it for routing.
Network apply_cost_schedule(const Network& net, const CostSchedule& schedule,
                            long t);

// Walks a schedule slot by slot without rebuilding untouched networks.
class ScheduleCursor {
 public:
  ScheduleCursor(Network base, const CostSchedule& schedule);
  // Advances to slot t (non-decreasing calls) and returns the current view.
  const Network& at_slot(long t);
  // Overrides applied so far; changes exactly when the view changes.
  std::size_t applied() const { return next_; }

 private:
  Network current_;
  std::vector<CostOverride> overrides_;
  std::size_t next_ = 0;
};

// Re-bands device positions at each keyframe slot and emits the overrides
// that transform the base geometry into it (mobility scripts).
CostSchedule schedule_from_positions(
    const std::vector<std::pair<long, std::vector<Point>>>& keyframes,
    double range_m, const std::vector<CostBand>& cost_bands, double bs_cost,
    const Network& base);

// Plain-text formats: one request per line "t,user,file"; one override per
// line "t,i,j,cost".
Trace load_trace(std::istream& in);
Trace load_trace_file(const std::string& path);
void save_trace(const Trace& trace, std::ostream& out);
void save_trace_file(const Trace& trace, const std::string& path);
CostSchedule load_cost_schedule(std::istream& in);
CostSchedule load_cost_schedule_file(const std::string& path);
void save_cost_schedule(const CostSchedule& schedule, std::ostream& out);

}  // namespace d2dcache
