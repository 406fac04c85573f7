// Command-line front end: run experiments, generate traces, solve the
// hindsight benchmark, validate configs.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "d2dcache/harness.hpp"
#include "d2dcache/hindsight.hpp"
#include "d2dcache/workload.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_dir) {
  auto cfg = d2dcache::ExperimentConfig::from_json_file(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  const auto results = d2dcache::run_experiment(cfg);
  for (std::size_t rep = 0; rep < results.size(); ++rep) {
    const auto& series = results[rep];
    std::printf("replication %zu (T=%ld):\n", rep, series.trace.horizon());
    for (const auto& m : series.policies)
      std::printf("  %-10s avg_cost=%.6f  regret=%.3f\n", m.policy.c_str(),
                  m.final_running_avg(), m.final_regret());
    std::printf("  %-10s avg_cost=%.6f  (regret bound %.3f, locality %s)\n",
                "hindsight",
                series.hindsight_total / double(series.trace.horizon()),
                series.docp_regret_bound,
                series.locality_ok ? "ok" : "VIOLATED");
  }
  std::printf("wrote CSV output under %s\n", cfg.output_dir.c_str());
  return 0;
}

int cmd_generate_trace(const std::string& config_path,
                       const std::string& out_path, int replication) {
  const auto cfg = d2dcache::ExperimentConfig::from_json_file(config_path);
  const auto net = d2dcache::network_for_replication(cfg, replication);
  const auto initial =
      d2dcache::initial_cache_for_replication(cfg, net, replication);
  const auto spec = d2dcache::workload_for_replication(cfg, replication);
  const auto trace = d2dcache::generate_trace(spec, net, &initial);
  d2dcache::save_trace_file(trace, out_path);
  std::printf("wrote %ld requests to %s\n", trace.horizon(), out_path.c_str());
  return 0;
}

int cmd_hindsight(const std::string& config_path, const std::string& trace_path,
                  const std::string& out_path, int replication) {
  const auto cfg = d2dcache::ExperimentConfig::from_json_file(config_path);
  const auto net = d2dcache::network_for_replication(cfg, replication);
  auto trace = d2dcache::load_trace_file(trace_path);
  trace.validate(net);
  const auto profile = d2dcache::aggregate(trace);
  const auto result =
      d2dcache::best_static(profile, net, cfg.hindsight_options);

  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
    return 1;
  }
  out << "device,file,fraction\n";
  for (int i = 1; i <= net.device_count(); ++i)
    for (int n = 0; n < net.catalog_size(); ++n) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.10g", result.placement.at(i, n));
      out << i << ',' << n << ',' << buf << '\n';
    }
  std::printf("total hindsight cost %.6f over %ld slots (%s after %d iters)\n",
              result.total_cost, trace.horizon(),
              result.converged ? "converged" : "iteration cap reached",
              result.iterations);
  return 0;
}

int cmd_validate(const std::string& config_path) {
  d2dcache::ExperimentConfig::from_json_file(config_path);
  std::printf("%s: OK\n", config_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BS-assisted D2D cache policy simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string trace_path;
  std::string out_path;
  int replication = 0;

  auto* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("-o,--output", output_dir, "override the output directory");

  auto* gen =
      app.add_subcommand("generate-trace", "write a request trace to a file");
  gen->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();
  gen->add_option("-t,--out", out_path, "trace file to write")->required();
  gen->add_option("-r,--replication", replication,
                  "replication index the seed derives from");

  auto* hind = app.add_subcommand(
      "hindsight", "solve the best static placement for a trace");
  hind->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();
  hind->add_option("-t,--trace", trace_path, "trace file to read")->required();
  hind->add_option("-y,--out", out_path, "placement CSV to write")->required();
  hind->add_option("-r,--replication", replication,
                   "replication index the network derives from");

  auto* val =
      app.add_subcommand("validate-config", "check a config and exit");
  val->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, output_dir);
    if (gen->parsed()) return cmd_generate_trace(config_path, out_path,
                                                 replication);
    if (hind->parsed())
      return cmd_hindsight(config_path, trace_path, out_path, replication);
    if (val->parsed()) return cmd_validate(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
