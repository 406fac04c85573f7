#include <cmath>
#include <random>
#include <stdexcept>

#include "d2dcache/hindsight.hpp"
#include "d2dcache/workload.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace d2dcache;
using testsupport::star_network;

namespace {

double evaluate(const CacheState& y, const DemandProfile& profile,
                const Network& net) {
  std::vector<EpochDemand> single;
  single.push_back({net, profile});
  return total_static_cost(y, single);
}

DemandProfile profile_of(std::initializer_list<std::pair<std::pair<int, int>, long>> counts) {
  DemandProfile p;
  for (const auto& [key, c] : counts) {
    p.counts[key] = c;
    p.total += c;
  }
  return p;
}

}  // namespace

TEST_CASE("aggregate counts requests per (user, file)") {
  Trace trace{{{1, 1, 0}, {2, 1, 0}, {3, 2, 1}}};
  const auto profile = aggregate(trace);
  CHECK(profile.total == 3);
  CHECK(profile.counts.at({1, 0}) == 2);
  CHECK(profile.counts.at({2, 1}) == 1);
  CHECK(profile.counts.size() == 2);
}

TEST_CASE("aggregate of an empty trace is empty") {
  const auto profile = aggregate(Trace{});
  CHECK(profile.total == 0);
  CHECK(profile.counts.empty());
}

TEST_CASE("aggregate conserves the horizon on a generated trace") {
  const auto net = star_network({2, 5}, 10, 20, 3);
  GeneratorSpec spec;
  spec.kind = TraceKind::zipf_iid;
  spec.horizon = 500;
  spec.zipf_exponent = 0.9;
  spec.seed = 99;
  const auto trace = generate_trace(spec, net);
  CHECK(aggregate(trace).total == 500);
}

TEST_CASE("isolated device caches its heaviest file") {
  // 1 user, N=2, C=1, BS at 10, no D2D: 3 requests for file 0, 1 for file 1
  const auto net = build_network({{0, 0}}, 500, {{500, 2}}, 10, 2, {1});
  const auto profile = profile_of({{{1, 0}, 3}, {{1, 1}, 1}});
  const auto result = best_static(profile, net);
  CHECK(result.placement.at(1, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.placement.at(1, 1) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(result.total_cost == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("single hot file ends up fully cached at the requester") {
  const auto net = star_network({2}, 10, 2, 1);
  const auto profile = profile_of({{{1, 0}, 5}});
  const auto result = best_static(profile, net);
  CHECK(result.total_cost <= 1e-3);
  CHECK(result.placement.at(1, 0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("symmetric instance solves symmetrically and meets the oracle") {
  // two devices linked at cost 2, each requesting both files once
  const auto net = star_network({2}, 10, 2, 1);
  const auto profile =
      profile_of({{{1, 0}, 1}, {{1, 1}, 1}, {{2, 0}, 1}, {{2, 1}, 1}});
  const auto result = best_static(profile, net);
  const auto [grid_y, grid_cost] = brute_force_static(profile, net, 0.05);
  CHECK(result.total_cost == doctest::Approx(grid_cost).epsilon(1e-3));
  // symmetric demand from a symmetric start keeps the iterates symmetric
  CHECK(result.placement.at(1, 0) ==
        doctest::Approx(result.placement.at(2, 1)).epsilon(1e-6));
  CHECK(result.placement.at(1, 1) ==
        doctest::Approx(result.placement.at(2, 0)).epsilon(1e-6));
}

TEST_CASE("grid oracle agrees with the solver on small instances") {
  std::mt19937 rng(55);
  // I*N <= 6 instances with integral optima: optimum lands on the grid
  for (int trial = 0; trial < 5; ++trial) {
    const auto net = star_network({2}, 10, 3, 1);
    DemandProfile profile;
    for (int user = 1; user <= 2; ++user) {
      const int hot = testsupport::uniform_int(rng, 0, 2);
      profile.counts[{user, hot}] += 6;  // dominant file per user
      profile.counts[{user, (hot + 1) % 3}] += 1;
      profile.total += 7;
    }
    const auto result = best_static(profile, net);
    const auto [grid_y, grid_cost] = brute_force_static(profile, net, 0.05);
    CHECK(result.total_cost <= grid_cost + 1e-3);
    CHECK(result.total_cost >= grid_cost - 1e-3);
  }
}

TEST_CASE("brute force rejects oversized instances and infeasible points") {
  const auto net = star_network({2}, 10, 4, 2);  // 2 * 4 = 8 dims
  CHECK_THROWS_AS(brute_force_static(DemandProfile{}, net, 0.1),
                  std::invalid_argument);

  const auto small = build_network({{0, 0}}, 500, {{500, 2}}, 10, 2, {1});
  const auto profile = profile_of({{{1, 0}, 1}});
  const auto [y, cost] = brute_force_static(profile, small, 0.25);
  CHECK(y.at(1, 0) + y.at(1, 1) <= 1.0 + 1e-9);  // capacity respected
  CHECK(cost == doctest::Approx(0.0));           // integral optimum found
}

TEST_CASE("best_static beats random feasible placements") {
  std::mt19937 rng(56);
  const auto net = testsupport::random_network(rng, 3, 4, 2);
  GeneratorSpec spec;
  spec.kind = TraceKind::zipf_iid;
  spec.horizon = 300;
  spec.zipf_exponent = 0.9;
  spec.seed = 7;
  const auto profile = aggregate(generate_trace(spec, net));
  const auto result = best_static(profile, net);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = testsupport::random_feasible_cache(rng, net);
    CHECK(result.total_cost <= evaluate(y, profile, net) + 1e-6);
  }
  CHECK(result.total_cost <=
        evaluate(CacheState::uniform(net), profile, net) + 1e-6);
}

TEST_CASE("doubled counts double the cost but keep the argmin") {
  const auto net = star_network({2}, 10, 2, 1);
  const auto profile =
      profile_of({{{1, 0}, 4}, {{1, 1}, 1}, {{2, 0}, 2}, {{2, 1}, 3}});
  DemandProfile doubled;
  for (const auto& [key, c] : profile.counts) doubled.counts[key] = 2 * c;
  doubled.total = 2 * profile.total;

  const auto a = best_static(profile, net);
  const auto b = best_static(doubled, net);
  CHECK(b.total_cost == doctest::Approx(2.0 * a.total_cost).epsilon(1e-3));
  for (int i = 1; i <= 2; ++i)
    for (int n = 0; n < 2; ++n)
      CHECK(a.placement.at(i, n) ==
            doctest::Approx(b.placement.at(i, n)).epsilon(1e-2));
}

TEST_CASE("iteration cap reports non-convergence") {
  const auto net = star_network({2}, 10, 2, 1);
  const auto profile = profile_of({{{1, 0}, 3}, {{2, 1}, 2}});
  BestStaticOptions opts;
  opts.max_iters = 3;
  const auto result = best_static(profile, net, opts);
  CHECK_FALSE(result.converged);
  CHECK(result.iterations == 3);
}

TEST_CASE("empty profile is rejected") {
  const auto net = star_network({2}, 10, 2, 1);
  CHECK_THROWS_AS(best_static(DemandProfile{}, net), std::invalid_argument);
}
