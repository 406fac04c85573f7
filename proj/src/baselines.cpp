#include "d2dcache/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace d2dcache {

ReactiveState::ReactiveState(const Network& net)
    : catalog_size_(net.catalog_size()),
      capacities_(net.capacities()),
      lists_(net.device_count()),
      index_(net.device_count()),
      counts_(net.device_count()),
      last_used_(net.device_count()) {}

bool ReactiveState::holds(int device, int file) const {
  return index_[device - 1].count(file) > 0;
}

const std::list<int>& ReactiveState::cache_list(int device) const {
  return lists_[device - 1];
}

long ReactiveState::frequency(int device, int file) const {
  auto it = counts_[device - 1].find(file);
  return it == counts_[device - 1].end() ? 0 : it->second;
}

void ReactiveState::touch(int device, int file) {
  auto& idx = index_[device - 1];
  auto it = idx.find(file);
  if (it == idx.end())
    throw std::logic_error("touch on a file the cache does not hold");
  auto& list = lists_[device - 1];
  list.splice(list.begin(), list, it->second);
}

void ReactiveState::insert(int device, int file) {
  auto& idx = index_[device - 1];
  if (idx.count(file)) return;
  const int cap = capacities_[device - 1];
  if (cap == 0) return;
  auto& list = lists_[device - 1];
  while (static_cast<int>(list.size()) >= cap) {
    idx.erase(list.back());
    list.pop_back();
  }
  list.push_front(file);
  idx[file] = list.begin();
}

void ReactiveState::lfu_update(int device, int file, long slot) {
  auto& counts = counts_[device - 1];
  auto& used = last_used_[device - 1];
  counts[file] += 1;
  used[file] = slot;
  if (holds(device, file)) {
    touch(device, file);
    return;
  }
  const int cap = capacities_[device - 1];
  if (cap == 0) return;
  auto& list = lists_[device - 1];
  if (static_cast<int>(list.size()) < cap) {
    list.push_front(file);
    index_[device - 1][file] = list.begin();
    return;
  }
  // full: the new file displaces the weakest entry iff it beats it on
  // (count, last use); the fresh request wins count ties by recency
  auto weakest = list.end();
  for (auto it = list.begin(); it != list.end(); ++it) {
    if (weakest == list.end() ||
        std::pair(counts[*it], used[*it]) <
            std::pair(counts[*weakest], used[*weakest]))
      weakest = it;
  }
  if (std::pair(counts[file], used[file]) >
      std::pair(counts[*weakest], used[*weakest])) {
    index_[device - 1].erase(*weakest);
    list.erase(weakest);
    list.push_front(file);
    index_[device - 1][file] = list.begin();
  }
}

CacheState ReactiveState::to_cache_state() const {
  CacheState y(static_cast<int>(lists_.size()), catalog_size_);
  for (std::size_t d = 0; d < lists_.size(); ++d)
    for (int file : lists_[d]) y.set(static_cast<int>(d) + 1, file, 1.0);
  return y;
}

bool ReactiveState::operator==(const ReactiveState& other) const {
  return lists_ == other.lists_ && counts_ == other.counts_;
}

std::pair<double, int> reactive_route(const Request& req,
                                      const ReactiveState& state,
                                      const Network& net) {
  for (int j : net.neighborhood(req.user)) {  // ascending cost
    if (j == kBsNode) return {net.cost(req.user, j), j};
    if (state.holds(j, req.file)) return {net.cost(req.user, j), j};
  }
  return {net.bs_cost(req.user), kBsNode};  // BS is always a neighbor
}

void baseline_update(ReactivePolicy kind, ReactiveState& state,
                     const Request& req, const Network& net,
                     MlruVariant variant) {
  switch (kind) {
    case ReactivePolicy::LRU:
      if (state.holds(req.user, req.file))
        state.touch(req.user, req.file);
      else
        state.insert(req.user, req.file);
      return;

    case ReactivePolicy::LFU:
      state.lfu_update(req.user, req.file, req.slot);
      return;

    case ReactivePolicy::mLRU: {
      bool hit = false;
      for (int j : net.neighborhood(req.user)) {
        if (j == kBsNode || !state.holds(j, req.file)) continue;
        hit = true;
        state.touch(j, req.file);
        if (variant == MlruVariant::One) return;
      }
      if (!hit) state.insert(req.user, req.file);
      return;
    }

    case ReactivePolicy::lazyLRU: {
      for (int j : net.neighborhood(req.user))
        if (j != kBsNode && state.holds(j, req.file)) return;  // lazy: no-op
      state.insert(req.user, req.file);
      return;
    }
  }
  throw std::invalid_argument("unknown reactive policy");
}

}  // namespace d2dcache
