#include "d2dcache/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "d2dcache/projection.hpp"
#include "d2dcache/routing.hpp"
#include "json.hpp"

namespace d2dcache {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config error at " + where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains(key))
    fail(where, std::string("missing required field '") + key + "'");
  return j.at(key);
}

double need_number(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

long need_integer(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<long>();
}

std::string need_string(const json& j, const char* key,
                        const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::uint64_t derive_seed(std::uint64_t rep_seed, std::uint64_t stream) {
  std::uint64_t x = rep_seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

StepSchedule parse_schedule(const std::string& s, const std::string& where) {
  if (s == "constant_T") return StepSchedule::constant_T;
  if (s == "inverse_sqrt_t") return StepSchedule::inverse_sqrt_t;
  if (s == "doubling") return StepSchedule::doubling;
  fail(where, "unknown step schedule '" + s + "'");
}

TraceKind parse_trace_kind(const std::string& s, const std::string& where) {
  if (s == "zipf_iid") return TraceKind::zipf_iid;
  if (s == "shifting_zipf") return TraceKind::shifting_zipf;
  if (s == "adversarial_cyclic") return TraceKind::adversarial_cyclic;
  if (s == "replay") return TraceKind::replay;
  fail(where, "unknown workload kind '" + s + "'");
}

PolicyConfig parse_policy(const json& j, const std::string& where) {
  PolicyConfig pc;
  const std::string kind = need_string(j, "kind", where);
  if (kind == "docp") {
    pc.kind = PolicyConfig::Kind::docp;
  } else if (kind == "lru") {
    pc.kind = PolicyConfig::Kind::lru;
  } else if (kind == "lfu") {
    pc.kind = PolicyConfig::Kind::lfu;
  } else if (kind == "mlru") {
    pc.kind = PolicyConfig::Kind::mlru;
  } else if (kind == "lazy_lru") {
    pc.kind = PolicyConfig::Kind::lazy_lru;
  } else {
    fail(where + ".kind", "unknown policy '" + kind + "'");
  }
  pc.name = j.value("name", kind);
  if (pc.name.empty() ||
      pc.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
          std::string::npos)
    fail(where + ".name", "policy names are [A-Za-z0-9_-] (they become file "
                          "names)");
  if (j.contains("schedule"))
    pc.schedule =
        parse_schedule(j.at("schedule").get<std::string>(), where + ".schedule");
  if (j.contains("gamma"))
    pc.gamma_override = j.at("gamma").get<double>();
  if (j.contains("variant")) {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "one")
      pc.mlru_variant = MlruVariant::One;
    else if (v == "all")
      pc.mlru_variant = MlruVariant::All;
    else
      fail(where + ".variant", "expected 'one' or 'all'");
  }
  return pc;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  const long version = need_integer(j, "schema_version", "config");
  if (version != 1)
    fail("config.schema_version", "unsupported version " +
                                       std::to_string(version) +
                                       " (this build reads version 1)");
  cfg.schema_version = 1;
  cfg.seed = static_cast<std::uint64_t>(need_integer(j, "seed", "config"));
  cfg.replications =
      static_cast<int>(j.value("replications", 1));
  if (cfg.replications < 1) fail("config.replications", "must be >= 1");

  const json& net = need(j, "network", "config");
  const json& placement = need(net, "placement", "config.network");
  const std::string pk =
      need_string(placement, "kind", "config.network.placement");
  if (pk == "random") {
    cfg.cell_size_m =
        need_number(placement, "cell_size_m", "config.network.placement");
    cfg.device_count = static_cast<int>(
        need_integer(placement, "device_count", "config.network.placement"));
    if (cfg.cell_size_m <= 0.0)
      fail("config.network.placement.cell_size_m", "must be positive");
    if (cfg.device_count < 1)
      fail("config.network.placement.device_count", "must be >= 1");
  } else if (pk == "positions") {
    const json& pos =
        need(placement, "positions", "config.network.placement");
    if (!pos.is_array() || pos.empty())
      fail("config.network.placement.positions", "expected a nonempty array");
    for (const auto& p : pos) {
      if (!p.is_array() || p.size() != 2)
        fail("config.network.placement.positions", "each entry must be [x, y]");
      cfg.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    cfg.device_count = static_cast<int>(cfg.positions.size());
  } else {
    fail("config.network.placement.kind", "expected 'random' or 'positions'");
  }
  cfg.range_m = need_number(net, "range_m", "config.network");
  const json& bands = need(net, "cost_bands", "config.network");
  if (!bands.is_array() || bands.empty())
    fail("config.network.cost_bands", "expected a nonempty array");
  for (const auto& b : bands) {
    if (!b.is_array() || b.size() != 2)
      fail("config.network.cost_bands", "each band must be [distance, cost]");
    cfg.cost_bands.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  cfg.bs_cost = need_number(net, "bs_cost", "config.network");

  cfg.catalog_size =
      static_cast<int>(need_integer(j, "catalog_size", "config"));
  if (cfg.catalog_size < 1) fail("config.catalog_size", "must be >= 1");
  if (j.contains("capacities")) {
    for (const auto& c : j.at("capacities"))
      cfg.capacities.push_back(c.get<int>());
    if (static_cast<int>(cfg.capacities.size()) != cfg.device_count)
      fail("config.capacities", "need one capacity per device");
  } else {
    const long cap = need_integer(j, "capacity", "config");
    cfg.capacities.assign(cfg.device_count, static_cast<int>(cap));
  }

  const json& wl = need(j, "workload", "config");
  cfg.workload.kind =
      parse_trace_kind(need_string(wl, "kind", "config.workload"),
                       "config.workload.kind");
  cfg.workload.horizon = need_integer(wl, "T", "config.workload");
  if (cfg.workload.horizon < 1) fail("config.workload.T", "must be >= 1");
  if (wl.contains("zipf_exponent"))
    cfg.workload.zipf_exponent = wl.at("zipf_exponent").get<double>();
  if (wl.contains("shift_period"))
    cfg.workload.shift_period = wl.at("shift_period").get<long>();
  if (wl.contains("user_weights"))
    for (const auto& w : wl.at("user_weights"))
      cfg.workload.user_weights.push_back(w.get<double>());
  if (cfg.workload.kind == TraceKind::replay)
    cfg.workload.trace_file = need_string(wl, "trace_file", "config.workload");
  if (cfg.workload.kind == TraceKind::shifting_zipf &&
      cfg.workload.shift_period < 1)
    fail("config.workload.shift_period", "must be >= 1 for shifting_zipf");
  if (!cfg.workload.user_weights.empty() &&
      static_cast<int>(cfg.workload.user_weights.size()) != cfg.device_count)
    fail("config.workload.user_weights", "need one weight per device");

  const json& pols = need(j, "policies", "config");
  if (!pols.is_array() || pols.empty())
    fail("config.policies", "expected a nonempty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < pols.size(); ++i) {
    auto pc = parse_policy(pols[i],
                           "config.policies[" + std::to_string(i) + "]");
    if (!names.insert(pc.name).second)
      fail("config.policies", "duplicate policy name '" + pc.name + "'");
    cfg.policies.push_back(std::move(pc));
  }

  const std::string init = j.value("initial_cache", "uniform");
  if (init == "uniform")
    cfg.initial_cache = InitialCache::uniform;
  else if (init == "zeros")
    cfg.initial_cache = InitialCache::zeros;
  else if (init == "random_feasible")
    cfg.initial_cache = InitialCache::random_feasible;
  else
    fail("config.initial_cache",
         "expected 'uniform', 'zeros' or 'random_feasible'");

  if (j.contains("snapshot_slots")) {
    for (const auto& s : j.at("snapshot_slots")) {
      const long slot = s.get<long>();
      if (slot < 1 || slot > cfg.workload.horizon)
        fail("config.snapshot_slots", "slot " + std::to_string(slot) +
                                          " outside 1..T");
      cfg.snapshot_slots.push_back(slot);
    }
  }

  if (j.contains("hindsight")) {
    const json& h = j.at("hindsight");
    cfg.hindsight_options.max_iters =
        static_cast<int>(h.value("max_iters", cfg.hindsight_options.max_iters));
    cfg.hindsight_options.tol = h.value("tol", cfg.hindsight_options.tol);
    cfg.hindsight_options.step_scale =
        h.value("step_scale", cfg.hindsight_options.step_scale);
  }
  cfg.cost_schedule_file = j.value("cost_schedule_file", "");
  cfg.output_dir = j.value("output_dir", "out");
  cfg.log_messages = j.value("log_messages", false);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<long> ExperimentConfig::effective_snapshots() const {
  std::vector<long> slots = snapshot_slots;
  if (slots.empty()) {
    slots.push_back(std::min<long>(10, workload.horizon));
    slots.push_back(workload.horizon);
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

std::vector<double> compute_regret(const std::vector<double>& policy_costs,
                                   const std::vector<double>& hindsight_costs) {
  if (policy_costs.size() != hindsight_costs.size())
    throw std::invalid_argument("regret series need equal lengths");
  std::vector<double> regret(policy_costs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < policy_costs.size(); ++i) {
    acc += policy_costs[i] - hindsight_costs[i];
    regret[i] = acc;
  }
  return regret;
}

Network network_for_replication(const ExperimentConfig& cfg, int rep_index) {
  std::vector<Point> positions = cfg.positions;
  if (positions.empty()) {
    std::mt19937_64 rng(derive_seed(cfg.seed + rep_index, 2));
    positions.resize(cfg.device_count);
    for (auto& p : positions) {
      p.x = uniform01(rng) * cfg.cell_size_m;
      p.y = uniform01(rng) * cfg.cell_size_m;
    }
  }
  return build_network(positions, cfg.range_m, cfg.cost_bands, cfg.bs_cost,
                       cfg.catalog_size, cfg.capacities);
}

CacheState initial_cache_for_replication(const ExperimentConfig& cfg,
                                         const Network& net, int rep_index) {
  switch (cfg.initial_cache) {
    case InitialCache::uniform:
      return CacheState::uniform(net);
    case InitialCache::zeros:
      return CacheState(net.device_count(), net.catalog_size());
    case InitialCache::random_feasible: {
      std::mt19937_64 rng(derive_seed(cfg.seed + rep_index, 3));
      CacheState y(net.device_count(), net.catalog_size());
      for (int i = 1; i <= net.device_count(); ++i) {
        for (int n = 0; n < net.catalog_size(); ++n)
          y.set(i, n, uniform01(rng));
        project_capped_box_inplace(y.row(i), net.capacity(i));
      }
      return y;
    }
  }
  throw std::logic_error("unknown initial cache kind");
}

GeneratorSpec workload_for_replication(const ExperimentConfig& cfg,
                                       int rep_index) {
  GeneratorSpec spec = cfg.workload;
  spec.seed = derive_seed(cfg.seed + rep_index, 1);
  return spec;
}

namespace {

PolicyMetrics run_docp_policy(const PolicyConfig& pc, const Network& net,
                              const Trace& trace,
                              const CostSchedule& schedule,
                              const CacheState& initial,
                              const std::vector<long>& snapshot_slots,
                              bool log_messages, MetricsSeries& out) {
  PolicyMetrics metrics;
  metrics.policy = pc.name;
  DocpParams params =
      DocpParams::from_network(net, trace.horizon(), pc.schedule);
  params.gamma_override = pc.gamma_override;
  out.docp_regret_bound = params.regret_bound();

  DocpState state(initial, params);
  ScheduleCursor cursor(net, schedule);
  std::string log;
  for (const auto& req : trace.requests) {
    const Network& net_t = cursor.at_slot(req.slot);
    const CacheState before = state.cache;
    const DocpStepResult step = docp_step(state, req, net_t);
    metrics.slot_costs.push_back(step.cost);
    if (!locality_audit(step.messages, before, state.cache, req, net_t,
                        step.gamma))
      out.locality_ok = false;
    if (log_messages)
      for (const auto& m : step.messages) {
        log += std::to_string(req.slot);
        log += ',';
        log += std::to_string(m.from);
        log += ',';
        log += std::to_string(m.to);
        log += ',';
        log += std::to_string(m.file);
        log += ',';
        log += fmt(m.beta);
        log += '\n';
      }
    if (std::binary_search(snapshot_slots.begin(), snapshot_slots.end(),
                           req.slot))
      out.allocations[req.slot][pc.name] = state.cache.total_allocation();
  }
  if (log_messages) out.message_logs[pc.name] = std::move(log);
  return metrics;
}

PolicyMetrics run_reactive_policy(const PolicyConfig& pc, const Network& net,
                                  const Trace& trace,
                                  const CostSchedule& schedule) {
  PolicyMetrics metrics;
  metrics.policy = pc.name;
  ReactivePolicy kind = ReactivePolicy::LRU;
  switch (pc.kind) {
    case PolicyConfig::Kind::lru: kind = ReactivePolicy::LRU; break;
    case PolicyConfig::Kind::lfu: kind = ReactivePolicy::LFU; break;
    case PolicyConfig::Kind::mlru: kind = ReactivePolicy::mLRU; break;
    case PolicyConfig::Kind::lazy_lru: kind = ReactivePolicy::lazyLRU; break;
    case PolicyConfig::Kind::docp:
      throw std::logic_error("docp is not a reactive policy");
  }
  ReactiveState state(net);
  ScheduleCursor cursor(net, schedule);
  for (const auto& req : trace.requests) {
    const Network& net_t = cursor.at_slot(req.slot);
    metrics.slot_costs.push_back(reactive_route(req, state, net_t).first);
    baseline_update(kind, state, req, net_t, pc.mlru_variant);
  }
  return metrics;
}

std::vector<EpochDemand> build_epochs(const Network& net, const Trace& trace,
                                      const CostSchedule& schedule) {
  std::vector<EpochDemand> epochs;
  ScheduleCursor cursor(net, schedule);
  std::size_t seen = static_cast<std::size_t>(-1);
  for (const auto& req : trace.requests) {
    const Network& net_t = cursor.at_slot(req.slot);
    if (epochs.empty() || cursor.applied() != seen) {
      epochs.push_back({net_t, {}});
      seen = cursor.applied();
    }
    epochs.back().profile.counts[{req.user, req.file}] += 1;
    epochs.back().profile.total += 1;
  }
  return epochs;
}

void finish_metrics(PolicyMetrics& m,
                    const std::vector<double>& hindsight_costs) {
  m.running_avg.resize(m.slot_costs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m.slot_costs.size(); ++i) {
    acc += m.slot_costs[i];
    m.running_avg[i] = acc / static_cast<double>(i + 1);
  }
  m.regret = compute_regret(m.slot_costs, hindsight_costs);
}

void write_or_throw(const std::filesystem::path& path,
                    const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

MetricsSeries run_replication(const ExperimentConfig& cfg, int rep_index) {
  const Network net = network_for_replication(cfg, rep_index);
  const CacheState initial =
      initial_cache_for_replication(cfg, net, rep_index);

  CostSchedule schedule;
  if (!cfg.cost_schedule_file.empty())
    schedule = load_cost_schedule_file(cfg.cost_schedule_file);
  schedule.validate(net);

  const GeneratorSpec spec = workload_for_replication(cfg, rep_index);
  Trace trace = generate_trace(spec, net, &initial);
  trace.validate(net);

  MetricsSeries series(net, trace);

  // best static configuration for this trace, then its slot costs
  const auto epochs = build_epochs(net, trace, schedule);
  const BestStaticResult hs =
      best_static_epochs(epochs, cfg.hindsight_options);
  series.hindsight_placement = hs.placement;
  series.hindsight_converged = hs.converged;
  {
    ScheduleCursor cursor(net, schedule);
    for (const auto& req : trace.requests) {
      const Network& net_t = cursor.at_slot(req.slot);
      series.hindsight_slot_costs.push_back(
          service_cost(req, hs.placement, net_t));
    }
    series.hindsight_total = 0.0;
    for (double c : series.hindsight_slot_costs)
      series.hindsight_total += c;
  }

  const auto snapshots = cfg.effective_snapshots();
  for (const auto& pc : cfg.policies) {
    PolicyMetrics m =
        pc.kind == PolicyConfig::Kind::docp
            ? run_docp_policy(pc, net, trace, schedule, initial, snapshots,
                              cfg.log_messages, series)
            : run_reactive_policy(pc, net, trace, schedule);
    finish_metrics(m, series.hindsight_slot_costs);
    series.policies.push_back(std::move(m));
  }
  for (long slot : snapshots)
    series.allocations[slot]["hindsight"] =
        series.hindsight_placement.total_allocation();
  return series;
}

std::vector<MetricsSeries> run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  std::vector<std::future<MetricsSeries>> futures;
  futures.reserve(cfg.replications);
  for (int rep = 0; rep < cfg.replications; ++rep)
    futures.push_back(std::async(std::launch::async, run_replication, cfg,
                                 rep));
  std::vector<MetricsSeries> results;
  results.reserve(cfg.replications);
  for (auto& f : futures) results.push_back(f.get());

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);

  std::string summary = "replication,policy,avg_cost,final_regret,regret_bound\n";
  for (int rep = 0; rep < cfg.replications; ++rep) {
    const MetricsSeries& series = results[rep];
    char rep_name[16];
    std::snprintf(rep_name, sizeof(rep_name), "rep%03d", rep);
    const fs::path rep_dir = out_dir / rep_name;
    fs::create_directories(rep_dir);

    std::string metrics = "slot,policy,cost,running_avg,regret\n";
    for (const auto& m : series.policies) {
      for (std::size_t i = 0; i < m.slot_costs.size(); ++i) {
        metrics += std::to_string(i + 1);
        metrics += ',';
        metrics += m.policy;
        metrics += ',';
        metrics += fmt(m.slot_costs[i]);
        metrics += ',';
        metrics += fmt(m.running_avg[i]);
        metrics += ',';
        metrics += fmt(m.regret[i]);
        metrics += '\n';
      }
    }
    {
      // the benchmark line is the time-average cost had the hindsight
      // placement been used throughout, so it plots flat
      const double flat_avg =
          series.hindsight_total / double(series.trace.horizon());
      for (std::size_t i = 0; i < series.hindsight_slot_costs.size(); ++i) {
        metrics += std::to_string(i + 1);
        metrics += ",hindsight,";
        metrics += fmt(series.hindsight_slot_costs[i]);
        metrics += ',';
        metrics += fmt(flat_avg);
        metrics += ",0\n";
      }
    }
    write_or_throw(rep_dir / "metrics.csv", metrics);
    for (const auto& [policy, log] : series.message_logs)
      write_or_throw(rep_dir / ("messages_" + policy + ".log"), log);

    for (const auto& [slot, per_policy] : series.allocations) {
      std::string alloc = "file,policy,total_fraction\n";
      for (const auto& [policy, fractions] : per_policy) {
        for (std::size_t n = 0; n < fractions.size(); ++n) {
          alloc += std::to_string(n);
          alloc += ',';
          alloc += policy;
          alloc += ',';
          alloc += fmt(fractions[n]);
          alloc += '\n';
        }
      }
      write_or_throw(rep_dir / ("allocation_t" + std::to_string(slot) +
                                ".csv"),
                     alloc);
    }

    for (const auto& m : series.policies) {
      summary += std::to_string(rep);
      summary += ',';
      summary += m.policy;
      summary += ',';
      summary += fmt(m.final_running_avg());
      summary += ',';
      summary += fmt(m.final_regret());
      summary += ',';
      summary += fmt(series.docp_regret_bound);
      summary += '\n';
    }
    summary += std::to_string(rep);
    summary += ",hindsight,";
    summary += fmt(series.hindsight_total /
                   static_cast<double>(series.trace.horizon()));
    summary += ",0,";
    summary += fmt(series.docp_regret_bound);
    summary += '\n';
  }
  write_or_throw(out_dir / "summary.csv", summary);
  return results;
}

}  // namespace d2dcache
