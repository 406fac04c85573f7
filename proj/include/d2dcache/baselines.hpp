// Reactive whole-file policies served through the same cost model: LRU,
// LFU, and the neighborhood-aware mLRU and lazy-LRU variants.
#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

enum class ReactivePolicy { LRU, LFU, mLRU, lazyLRU };

// mLRU hit handling: refresh the single serving cache, or every holder in
// the neighborhood.
enum class MlruVariant { One, All };

class ReactiveState {
 public:
  explicit ReactiveState(const Network& net);

  bool holds(int device, int file) const;
  const std::list<int>& cache_list(int device) const;  // most-recent-first
  long frequency(int device, int file) const;          // LFU counters

  // Moves file to the front of device's list (must be present).
  void touch(int device, int file);
  // Inserts at front, evicting the device's LRU entry when full. No-op if
  // already present (use touch). Devices with zero capacity stay empty.
  void insert(int device, int file);
  // LFU bookkeeping: bump count, keep the device's top-C files by
  // (count, recency).
  void lfu_update(int device, int file, long slot);

  // Induced 0/1 fractional placement, for cost comparisons against the LP.
  CacheState to_cache_state() const;

  bool operator==(const ReactiveState&) const;

 private:
  int catalog_size_;
  std::vector<int> capacities_;
  std::vector<std::list<int>> lists_;
  std::vector<std::unordered_map<int, std::list<int>::iterator>> index_;
  std::vector<std::unordered_map<int, long>> counts_;      // LFU
  std::vector<std::unordered_map<int, long>> last_used_;   // LFU tie-break
};

// Serve from the cheapest neighborhood cache holding the whole file (the
// requester itself counts, at cost 0), else the BS. Returns (cost, source
// node). Matches service_cost on the induced 0/1 cache state.
std::pair<double, int> reactive_route(const Request& req,
                                      const ReactiveState& state,
                                      const Network& net);

// Post-request placement update for the chosen policy:
//   LRU      requester front-inserts the file, LRU eviction; neighbors
//            untouched.
//   LFU      requester bumps its counter and keeps its top-C files by
//            count, ties broken toward recency.
//   mLRU     a neighborhood hit refreshes the serving cache (or all
//            holders, per variant); a global miss inserts at the requester.
//   lazyLRU  insert at the requester only on a global neighborhood miss;
//            hits change nothing.
void baseline_update(ReactivePolicy kind, ReactiveState& state,
                     const Request& req, const Network& net,
                     MlruVariant variant = MlruVariant::One);

}  // namespace d2dcache
