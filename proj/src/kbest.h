// Copyright 2026 The chainattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINATTACK_SRC_KBEST_H_
#define CHAINATTACK_SRC_KBEST_H_

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace chainattack::internal {

// Enumerates index tuples over per-dimension option lists in order of total
// cost. costs[d] must be nondecreasing. Ties are broken by key(tuple)
// ascending. k == 0 enumerates everything.
template <typename KeyFn>
std::vector<std::vector<size_t>> KBestCombinations(
    const std::vector<std::vector<int64_t>>& costs, size_t k, KeyFn key) {
  if (costs.empty()) return {};
  for (const auto& c : costs) {
    if (c.empty()) return {};
  }
  struct Item {
    int64_t total;
    std::vector<size_t> index;
    size_t pivot;
  };
  auto greater = [](const Item& a, const Item& b) { return a.total > b.total; };
  std::priority_queue<Item, std::vector<Item>, decltype(greater)> heap(greater);
  auto total_of = [&](const std::vector<size_t>& idx) {
    int64_t t = 0;
    for (size_t d = 0; d < idx.size(); ++d) t += costs[d][idx[d]];
    return t;
  };
  std::vector<size_t> zero(costs.size(), 0);
  heap.push({total_of(zero), zero, 0});

  std::vector<std::pair<int64_t, std::vector<size_t>>> found;
  while (!heap.empty()) {
    if (k != 0 && found.size() >= k && heap.top().total > found[k - 1].first) {
      break;
    }
    Item item = heap.top();
    heap.pop();
    for (size_t j = item.pivot; j < costs.size(); ++j) {
      if (item.index[j] + 1 < costs[j].size()) {
        std::vector<size_t> next = item.index;
        ++next[j];
        heap.push({total_of(next), std::move(next), j});
      }
    }
    found.emplace_back(item.total, std::move(item.index));
  }

  std::vector<std::pair<std::pair<int64_t, std::string>, size_t>> order;
  order.reserve(found.size());
  for (size_t i = 0; i < found.size(); ++i) {
    order.push_back({{found[i].first, key(found[i].second)}, i});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<size_t>> out;
  for (const auto& [unused, i] : order) {
    if (k != 0 && out.size() == k) break;
    out.push_back(std::move(found[i].second));
  }
  return out;
}

}  // namespace chainattack::internal

#endif  // CHAINATTACK_SRC_KBEST_H_
