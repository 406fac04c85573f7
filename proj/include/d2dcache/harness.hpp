// Experiment runner: builds the network and workload from a config file,
// runs every configured policy over the same trace, benchmarks against the
// best static configuration in hindsight, and writes per-slot metrics and
// allocation snapshots as CSV.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2dcache/baselines.hpp"
#include "d2dcache/docp.hpp"
#include "d2dcache/hindsight.hpp"
#include "d2dcache/model.hpp"
#include "d2dcache/workload.hpp"

namespace d2dcache {

struct PolicyConfig {
  enum class Kind { docp, lru, lfu, mlru, lazy_lru };
  Kind kind = Kind::docp;
  std::string name;  // CSV label; defaults to the kind
  StepSchedule schedule = StepSchedule::constant_T;
  std::optional<double> gamma_override;
  MlruVariant mlru_variant = MlruVariant::One;
};

enum class InitialCache { uniform, zeros, random_feasible };

struct ExperimentConfig {
  int schema_version = 1;
  std::uint64_t seed = 0;
  int replications = 1;

  // network: either explicit positions or random placement in a square cell
  std::vector<Point> positions;
  int device_count = 0;
  double cell_size_m = 0.0;
  double range_m = 0.0;
  std::vector<CostBand> cost_bands;
  double bs_cost = 0.0;

  int catalog_size = 0;
  std::vector<int> capacities;

  GeneratorSpec workload;  // seed is derived per replication
  std::vector<PolicyConfig> policies;
  InitialCache initial_cache = InitialCache::uniform;
  std::vector<long> snapshot_slots;  // default {10, T}
  BestStaticOptions hindsight_options;
  std::string cost_schedule_file;
  std::string output_dir = "out";
  bool log_messages = false;  // rep###/messages_<policy>.log

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::vector<long> effective_snapshots() const;
};

struct PolicyMetrics {
  std::string policy;
  std::vector<double> slot_costs;
  std::vector<double> running_avg;  // running_avg[t-1] = sum_{s<=t} cost_s / t
  std::vector<double> regret;       // R_t vs the hindsight benchmark

  double final_running_avg() const { return running_avg.back(); }
  double final_regret() const { return regret.back(); }
};

// Everything measured on one replication. Policies all consume the same
// trace; DOCP costs are accrued on pre-update caches.
struct MetricsSeries {
  MetricsSeries(Network n, Trace t)
      : net(std::move(n)),
        trace(std::move(t)),
        hindsight_placement(net.device_count(), net.catalog_size()) {}

  Network net;
  Trace trace;
  std::vector<PolicyMetrics> policies;
  std::vector<double> hindsight_slot_costs;
  double hindsight_total = 0.0;
  CacheState hindsight_placement;
  bool hindsight_converged = false;
  // snapshot slot -> policy label -> per-file total cached fraction
  std::map<long, std::map<std::string, std::vector<double>>> allocations;
  bool locality_ok = true;        // audit over every DOCP slot
  double docp_regret_bound = 0.0; // c* sqrt(2 C J* T)
  // policy label -> "slot,from,to,file,beta" lines (when log_messages set)
  std::map<std::string, std::string> message_logs;
};

// R_t = sum_{s<=t} (cost_s - hindsight_s). Lengths must match.
std::vector<double> compute_regret(const std::vector<double>& policy_costs,
                                   const std::vector<double>& hindsight_costs);

Network network_for_replication(const ExperimentConfig& cfg, int rep_index);
CacheState initial_cache_for_replication(const ExperimentConfig& cfg,
                                         const Network& net, int rep_index);
GeneratorSpec workload_for_replication(const ExperimentConfig& cfg,
                                       int rep_index);

MetricsSeries run_replication(const ExperimentConfig& cfg, int rep_index);

// Runs all replications (in parallel), writes rep###/metrics.csv,
// rep###/allocation_t#.csv and a top-level summary.csv under output_dir.
std::vector<MetricsSeries> run_experiment(const ExperimentConfig& cfg);

}  // namespace d2dcache
