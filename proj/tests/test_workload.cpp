#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "d2dcache/routing.hpp"
#include "d2dcache/workload.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace d2dcache;
using testsupport::star_network;

TEST_CASE("zipf weights follow the power law exactly") {
  const auto w = zipf_weights(2, 0.9);
  CHECK(w[0] / w[1] == doctest::Approx(std::pow(2.0, 0.9)).epsilon(1e-12));
  double total = 0.0;
  for (double x : w) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a vanishing exponent approaches the uniform distribution") {
  const auto w = zipf_weights(5, 1e-9);
  for (double x : w) CHECK(x == doctest::Approx(0.2).epsilon(1e-6));
  CHECK_THROWS_AS(zipf_weights(5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(zipf_weights(5, -1.0), std::invalid_argument);
}

TEST_CASE("traces are byte-identical under the same seed") {
  const auto net = star_network({2, 5}, 10, 30, 3);
  GeneratorSpec spec;
  spec.kind = TraceKind::zipf_iid;
  spec.horizon = 400;
  spec.zipf_exponent = 0.9;
  spec.seed = 1234;
  const auto a = generate_trace(spec, net);
  const auto b = generate_trace(spec, net);
  std::ostringstream sa, sb;
  save_trace(a, sa);
  save_trace(b, sb);
  CHECK(sa.str() == sb.str());

  spec.seed = 1235;
  const auto c = generate_trace(spec, net);
  std::ostringstream sc;
  save_trace(c, sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("empirical zipf frequencies match theory for the head files") {
  const auto net = star_network({2, 5, 7}, 10, 100, 6);
  GeneratorSpec spec;
  spec.kind = TraceKind::zipf_iid;
  spec.horizon = 1000000;
  spec.zipf_exponent = 0.9;
  spec.seed = 2024;
  const auto trace = generate_trace(spec, net);
  std::vector<long> counts(100, 0);
  for (const auto& r : trace.requests) counts[r.file] += 1;
  const auto w = zipf_weights(100, 0.9);
  for (int k = 0; k < 10; ++k) {
    const double empirical = double(counts[k]) / double(spec.horizon);
    CHECK(std::abs(empirical - w[k]) / w[k] < 0.01);
  }
}

TEST_CASE("user weights bias the requester draw") {
  const auto net = star_network({2}, 10, 10, 2);
  GeneratorSpec spec;
  spec.kind = TraceKind::zipf_iid;
  spec.horizon = 20000;
  spec.zipf_exponent = 0.9;
  spec.user_weights = {3.0, 1.0};
  spec.seed = 5;
  const auto trace = generate_trace(spec, net);
  long first = 0;
  for (const auto& r : trace.requests) first += r.user == 1 ? 1 : 0;
  CHECK(double(first) / spec.horizon == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("shifting zipf reshuffles the rank permutation every W slots") {
  const auto net = star_network({2}, 10, 50, 3);
  GeneratorSpec spec;
  spec.kind = TraceKind::shifting_zipf;
  spec.horizon = 9000;
  spec.zipf_exponent = 1.2;
  spec.shift_period = 3000;
  spec.seed = 77;
  const auto trace = generate_trace(spec, net);
  // top file per window should move around
  std::vector<int> top_file;
  for (int window = 0; window < 3; ++window) {
    std::map<int, long> counts;
    for (long t = window * 3000; t < (window + 1) * 3000; ++t)
      counts[trace.requests[t].file] += 1;
    int best = -1;
    long best_count = -1;
    for (const auto& [file, c] : counts)
      if (c > best_count) {
        best_count = c;
        best = file;
      }
    top_file.push_back(best);
  }
  CHECK((top_file[0] != top_file[1] || top_file[1] != top_file[2]));

  spec.shift_period = 0;
  CHECK_THROWS_AS(generate_trace(spec, net), std::invalid_argument);
}

TEST_CASE("adversarial rotation cycles least-cached files over users") {
  const auto net = star_network({2, 5}, 10, 4, 2);
  GeneratorSpec spec;
  spec.kind = TraceKind::adversarial_cyclic;
  spec.horizon = 12;

  SUBCASE("uniform probe degenerates to file-id order") {
    const auto probe = CacheState::uniform(net);
    const auto trace = generate_trace(spec, net, &probe);
    for (long t = 1; t <= 12; ++t) {
      CHECK(trace.requests[t - 1].user == (t - 1) % 3 + 1);
      CHECK(trace.requests[t - 1].file == (t - 1) % 4);
    }
  }
  SUBCASE("skewed probe starts from the least cached file") {
    CacheState probe(3, 4);
    probe.set(1, 0, 1.0);
    probe.set(2, 1, 0.5);  // file 2 and 3 untouched, then 1, then 0
    const auto trace = generate_trace(spec, net, &probe);
    CHECK(trace.requests[0].file == 2);
    CHECK(trace.requests[1].file == 3);
    CHECK(trace.requests[2].file == 1);
    CHECK(trace.requests[3].file == 0);
  }
}

TEST_CASE("trace files round-trip verbatim") {
  const auto net = star_network({2}, 10, 5, 2);
  Trace trace{{{1, 1, 0}, {2, 2, 4}, {3, 1, 3}}};
  std::ostringstream out;
  save_trace(trace, out);
  CHECK(out.str() == "1,1,0\n2,2,4\n3,1,3\n");

  std::istringstream in(out.str());
  const auto loaded = load_trace(in);
  REQUIRE(loaded.horizon() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(loaded.requests[i].slot == trace.requests[i].slot);
    CHECK(loaded.requests[i].user == trace.requests[i].user);
    CHECK(loaded.requests[i].file == trace.requests[i].file);
  }

  std::istringstream junk("1,1\n");
  CHECK_THROWS_AS(load_trace(junk), std::invalid_argument);
}

TEST_CASE("empty schedule leaves the network untouched at every slot") {
  const auto net = star_network({2, 5}, 10, 4, 2);
  const CostSchedule schedule;
  for (long t : {1L, 5L, 100L}) {
    const auto view = apply_cost_schedule(net, schedule, t);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) CHECK(view.cost(i, j) == net.cost(i, j));
  }
}

TEST_CASE("an override takes effect at its slot and persists") {
  const auto net = star_network({2}, 10, 4, 2);
  CostSchedule schedule;
  schedule.overrides.push_back({5, 1, 2, net.absent_cost()});
  schedule.overrides.push_back({5, 2, 1, net.absent_cost()});

  const auto before = apply_cost_schedule(net, schedule, 4);
  CHECK(before.link(1, 2));
  const auto after = apply_cost_schedule(net, schedule, 5);
  CHECK_FALSE(after.link(1, 2));
  const auto later = apply_cost_schedule(net, schedule, 9);
  CHECK_FALSE(later.link(1, 2));

  // routing on the severed view goes to the BS even though the neighbor
  // holds the file
  CacheState y(2, 4);
  y.set(2, 1, 1.0);
  CHECK(service_cost(Request{1, 1, 1}, y, before) == doctest::Approx(2.0));
  CHECK(service_cost(Request{1, 1, 1}, y, after) == doctest::Approx(10.0));
}

TEST_CASE("schedule cursor matches the per-slot views") {
  const auto net = star_network({2, 5}, 10, 4, 2);
  CostSchedule schedule;
  schedule.overrides.push_back({3, 1, 2, 7.0});
  schedule.overrides.push_back({6, 1, 2, net.absent_cost()});
  ScheduleCursor cursor(net, schedule);
  for (long t = 1; t <= 8; ++t) {
    const auto& from_cursor = cursor.at_slot(t);
    const auto direct = apply_cost_schedule(net, schedule, t);
    CHECK(from_cursor.cost(1, 2) == direct.cost(1, 2));
  }
}

TEST_CASE("schedules cannot touch BS links or bound parameters") {
  const auto net = star_network({2, 5}, 10, 4, 2);
  CostSchedule bs_link;
  bs_link.overrides.push_back({2, 1, 0, 5.0});
  CHECK_THROWS_AS(bs_link.validate(net), std::invalid_argument);

  CostSchedule sever;
  sever.overrides.push_back({2, 1, 2, net.absent_cost()});
  sever.overrides.push_back({2, 1, 3, net.absent_cost()});
  const auto view = apply_cost_schedule(net, sever, 5);
  CHECK(view.max_bs_cost() == net.max_bs_cost());
  CHECK(view.max_capacity() == net.max_capacity());
  CHECK(view.capacities() == net.capacities());
}

TEST_CASE("override validation rejects dead-but-live costs") {
  const auto net = star_network({2}, 10, 4, 2);
  CostSchedule bad;
  bad.overrides.push_back({2, 1, 2, 15.0});  // above BS, below sentinel
  CHECK_THROWS_AS(bad.validate(net), std::invalid_argument);

  CostSchedule negative;
  negative.overrides.push_back({2, 1, 2, -1.0});
  CHECK_THROWS_AS(negative.validate(net), std::invalid_argument);

  CostSchedule unsorted;
  unsorted.overrides.push_back({5, 1, 2, 3.0});
  unsorted.overrides.push_back({2, 1, 2, 4.0});
  CHECK_THROWS_AS(unsorted.validate(net), std::invalid_argument);

  CostSchedule ok;
  ok.overrides.push_back({2, 1, 2, 4.0});
  ok.overrides.push_back({7, 1, 2, net.absent_cost()});
  CHECK_NOTHROW(ok.validate(net));
}

TEST_CASE("mobility keyframes emit re-banded overrides") {
  const std::vector<CostBand> bands{{100, 2}, {300, 5}, {500, 9}};
  const auto base =
      build_network({{0, 0}, {50, 0}}, 500, bands, 10, 4, {2, 2});
  // device 2 walks out of range at slot 10, comes back close at slot 20
  const std::vector<std::pair<long, std::vector<Point>>> keyframes{
      {10, {{0, 0}, {700, 0}}},
      {20, {{0, 0}, {80, 0}}},
  };
  const auto schedule =
      schedule_from_positions(keyframes, 500, bands, 10, base);
  CHECK_NOTHROW(schedule.validate(base));

  const auto at5 = apply_cost_schedule(base, schedule, 5);
  CHECK(at5.cost(1, 2) == 2.0);
  const auto at10 = apply_cost_schedule(base, schedule, 10);
  CHECK(at10.cost(1, 2) == base.absent_cost());
  CHECK_FALSE(at10.link(1, 2));
  const auto at20 = apply_cost_schedule(base, schedule, 20);
  CHECK(at20.cost(1, 2) == 2.0);
}

TEST_CASE("schedule files round-trip") {
  CostSchedule schedule;
  schedule.overrides.push_back({3, 1, 2, 7.5});
  schedule.overrides.push_back({9, 2, 1, 20.0});
  std::ostringstream out;
  save_cost_schedule(schedule, out);
  std::istringstream in(out.str());
  const auto loaded = load_cost_schedule(in);
  REQUIRE(loaded.overrides.size() == 2);
  CHECK(loaded.overrides[1].slot == 9);
  CHECK(loaded.overrides[1].cost == 20.0);
}
