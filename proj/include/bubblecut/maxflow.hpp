// Copyright 2026 The BubbleCut Authors.
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

#pragma once

#include <cstdint>
#include <vector>

namespace bubblecut {

// Dinic max-flow on integer capacities. Deterministic: arcs are explored in
// insertion order.
class MaxFlow {
 public:
  using Capacity = std::int64_t;
  static constexpr Capacity kInfinite = INT64_MAX / 4;

  explicit MaxFlow(std::size_t nodes);

  std::size_t add_node();
  // Adds the arc pair u→v (capacity forward) and v→u (capacity backward).
  void add_edge(std::size_t u, std::size_t v, Capacity forward, Capacity backward);

  Capacity solve(std::size_t source, std::size_t sink);

  // After solve(): nodes reachable from the source in the residual graph.
  std::vector<std::uint8_t> source_side(std::size_t source) const;
  // After solve(): nodes that can reach the sink in the residual graph.
  std::vector<std::uint8_t> sink_side(std::size_t sink) const;

 private:
  struct Arc {
    std::size_t to;
    Capacity residual;
  };
  bool build_levels(std::size_t source, std::size_t sink);
  Capacity push(std::size_t source, std::size_t sink);

  std::vector<std::vector<std::size_t>> adjacency_;  // arc indices
  std::vector<Arc> arcs_;                             // arcs 2k and 2k+1 are a pair
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace bubblecut
