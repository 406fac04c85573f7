#include "d2dcache/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace d2dcache {

namespace {

// mt19937_64 output mapped to [0,1) explicitly, so traces are reproducible
// across standard libraries (std distributions are not pinned).
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::size_t>(it - cdf.begin());
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  const double total = cdf.back();
  for (double& c : cdf) c /= total;
  return cdf;
}

void shuffle_in_place(std::vector<int>& perm, std::mt19937_64& rng) {
  for (std::size_t k = perm.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * double(k));
    std::swap(perm[k - 1], perm[std::min(j, k - 1)]);
  }
}

}  // namespace

std::vector<double> zipf_weights(int catalog_size, double exponent) {
  if (exponent <= 0.0)
    throw std::invalid_argument("zipf exponent must be positive");
  if (catalog_size < 1) throw std::invalid_argument("catalog must be nonempty");
  std::vector<double> w(catalog_size);
  double total = 0.0;
  for (int k = 0; k < catalog_size; ++k) {
    w[k] = 1.0 / std::pow(double(k + 1), exponent);
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

Trace generate_trace(const GeneratorSpec& spec, const Network& net,
                     const CacheState* initial_probe) {
  if (spec.kind == TraceKind::replay) {
    Trace t = load_trace_file(spec.trace_file);
    t.validate(net);
    return t;
  }
  if (spec.horizon < 1) throw std::invalid_argument("horizon T must be >= 1");

  const int devices = net.device_count();
  const int files = net.catalog_size();
  std::vector<double> user_w = spec.user_weights;
  if (user_w.empty()) user_w.assign(devices, 1.0);
  if (static_cast<int>(user_w.size()) != devices)
    throw std::invalid_argument("one user weight per device required");
  for (double w : user_w)
    if (w < 0.0) throw std::invalid_argument("user weights must be >= 0");
  const auto user_cdf = cumulative(user_w);

  Trace trace;
  trace.requests.reserve(spec.horizon);

  if (spec.kind == TraceKind::adversarial_cyclic) {
    // Fixed rotation over the files least cached at the start, at rotating
    // users. Oblivious: looks at the initial configuration only.
    std::vector<int> order(files);
    std::iota(order.begin(), order.end(), 0);
    if (initial_probe != nullptr) {
      const auto alloc = initial_probe->total_allocation();
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return alloc[a] < alloc[b]; });
    }
    for (long t = 1; t <= spec.horizon; ++t) {
      const int user = static_cast<int>((t - 1) % devices) + 1;
      const int file = order[static_cast<std::size_t>((t - 1) % files)];
      trace.requests.push_back({t, user, file});
    }
    return trace;
  }

  const auto zipf_cdf = cumulative(zipf_weights(files, spec.zipf_exponent));
  std::mt19937_64 rng(spec.seed);
  std::vector<int> rank_to_file(files);
  std::iota(rank_to_file.begin(), rank_to_file.end(), 0);

  const long period =
      spec.kind == TraceKind::shifting_zipf ? spec.shift_period : 0;
  if (spec.kind == TraceKind::shifting_zipf && period < 1)
    throw std::invalid_argument("shift period W must be >= 1");

  for (long t = 1; t <= spec.horizon; ++t) {
    if (period > 0 && (t - 1) % period == 0 && t > 1)
      shuffle_in_place(rank_to_file, rng);
    const int user = static_cast<int>(sample_cdf(user_cdf, uniform01(rng))) + 1;
    const int rank = static_cast<int>(sample_cdf(zipf_cdf, uniform01(rng)));
    trace.requests.push_back({t, user, rank_to_file[rank]});
  }
  return trace;
}

void CostSchedule::validate(const Network& net) const {
  long prev = 0;
  for (const auto& ov : overrides) {
    if (ov.slot < 1)
      throw std::invalid_argument("override slots must be >= 1");
    if (ov.slot < prev)
      throw std::invalid_argument("overrides must be sorted by slot");
    prev = ov.slot;
    if (ov.from_node < 1 || ov.from_node > net.device_count() ||
        ov.to_node < 1 || ov.to_node > net.device_count())
      throw std::invalid_argument(
          "override must name a D2D link (BS links are fixed)");
    if (ov.from_node == ov.to_node)
      throw std::invalid_argument("cannot override a self link");
    const bool sentinel = ov.cost == net.absent_cost();
    const bool valid_live =
        ov.cost >= 0.0 && ov.cost < net.bs_cost(ov.from_node);
    if (!sentinel && !valid_live)
      throw std::invalid_argument(
          "override cost must be a valid link cost below the BS cost or the "
          "absent sentinel");
  }
}

Network apply_cost_schedule(const Network& net, const CostSchedule& schedule,
                            long t) {
  schedule.validate(net);
  Network current = net;
  for (const auto& ov : schedule.overrides) {
    if (ov.slot > t) break;
    current = current.with_cost(ov.from_node, ov.to_node, ov.cost);
  }
  return current;
}

ScheduleCursor::ScheduleCursor(Network base, const CostSchedule& schedule)
    : current_(std::move(base)), overrides_(schedule.overrides) {
  schedule.validate(current_);
}

const Network& ScheduleCursor::at_slot(long t) {
  while (next_ < overrides_.size() && overrides_[next_].slot <= t) {
    const auto& ov = overrides_[next_];
    current_ = current_.with_cost(ov.from_node, ov.to_node, ov.cost);
    ++next_;
  }
  return current_;
}

CostSchedule schedule_from_positions(
    const std::vector<std::pair<long, std::vector<Point>>>& keyframes,
    double range_m, const std::vector<CostBand>& cost_bands, double bs_cost,
    const Network& base) {
  CostSchedule schedule;
  Network prev = base;
  for (const auto& [slot, positions] : keyframes) {
    Network next = build_network(positions, range_m, cost_bands, bs_cost,
                                 base.catalog_size(), base.capacities());
    for (int i = 1; i <= base.device_count(); ++i)
      for (int j = 1; j <= base.device_count(); ++j) {
        if (i == j) continue;
        if (next.cost(i, j) != prev.cost(i, j))
          schedule.overrides.push_back({slot, i, j, next.cost(i, j)});
      }
    prev = std::move(next);
  }
  return schedule;
}

Trace load_trace(std::istream& in) {
  Trace trace;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Request r;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> r.slot >> c1 >> r.user >> c2 >> r.file) || c1 != ',' ||
        c2 != ',')
      throw std::invalid_argument("bad trace line " + std::to_string(lineno) +
                                  ": " + line);
    trace.requests.push_back(r);
  }
  return trace;
}

Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return load_trace(in);
}

void save_trace(const Trace& trace, std::ostream& out) {
  for (const auto& r : trace.requests)
    out << r.slot << ',' << r.user << ',' << r.file << '\n';
}

void save_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  save_trace(trace, out);
}

CostSchedule load_cost_schedule(std::istream& in) {
  CostSchedule schedule;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    CostOverride ov;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream ls(line);
    if (!(ls >> ov.slot >> c1 >> ov.from_node >> c2 >> ov.to_node >> c3 >>
          ov.cost) ||
        c1 != ',' || c2 != ',' || c3 != ',')
      throw std::invalid_argument("bad schedule line " +
                                  std::to_string(lineno) + ": " + line);
    schedule.overrides.push_back(ov);
  }
  return schedule;
}

CostSchedule load_cost_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file: " + path);
  return load_cost_schedule(in);
}

void save_cost_schedule(const CostSchedule& schedule, std::ostream& out) {
  for (const auto& ov : schedule.overrides)
    out << ov.slot << ',' << ov.from_node << ',' << ov.to_node << ','
        << ov.cost << '\n';
}

}  // namespace d2dcache
