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

#include "bubblecut/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace bubblecut {

MaxFlow::MaxFlow(std::size_t nodes) : adjacency_(nodes) {}

std::size_t MaxFlow::add_node() {
  adjacency_.emplace_back();
  return adjacency_.size() - 1;
}

void MaxFlow::add_edge(std::size_t u, std::size_t v, Capacity forward, Capacity backward) {
  adjacency_[u].push_back(arcs_.size());
  arcs_.push_back({v, forward});
  adjacency_[v].push_back(arcs_.size());
  arcs_.push_back({u, backward});
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
  level_.assign(adjacency_.size(), -1);
  std::queue<std::size_t> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    for (const std::size_t a : adjacency_[u]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[u] + 1;
        queue.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

// One blocking-flow augmentation along a level path, iterative to keep the
// stack bounded on large grids.
MaxFlow::Capacity MaxFlow::push(std::size_t source, std::size_t sink) {
  std::vector<std::size_t> path;  // arc indices
  std::size_t u = source;
  Capacity total = 0;
  while (true) {
    if (u == sink) {
      Capacity bottleneck = kInfinite;
      for (const std::size_t a : path) bottleneck = std::min(bottleneck, arcs_[a].residual);
      for (const std::size_t a : path) {
        arcs_[a].residual -= bottleneck;
        arcs_[a ^ 1].residual += bottleneck;
      }
      total += bottleneck;
      // Restart from the tail of the first saturated arc.
      std::size_t keep = 0;
      while (keep < path.size() && arcs_[path[keep]].residual > 0) ++keep;
      path.resize(keep);
      u = path.empty() ? source : arcs_[path.back()].to;
      continue;
    }
    bool advanced = false;
    for (std::size_t& c = cursor_[u]; c < adjacency_[u].size(); ++c) {
      const std::size_t a = adjacency_[u][c];
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && level_[arc.to] == level_[u] + 1) {
        path.push_back(a);
        u = arc.to;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;
    // Dead end: retreat.
    level_[u] = -1;
    if (path.empty()) break;
    path.pop_back();
    u = path.empty() ? source : arcs_[path.back()].to;
    ++cursor_[u];
  }
  return total;
}

MaxFlow::Capacity MaxFlow::solve(std::size_t source, std::size_t sink) {
  Capacity flow = 0;
  while (build_levels(source, sink)) {
    cursor_.assign(adjacency_.size(), 0);
    flow += push(source, sink);
  }
  return flow;
}

std::vector<std::uint8_t> MaxFlow::source_side(std::size_t source) const {
  std::vector<std::uint8_t> seen(adjacency_.size(), 0);
  std::vector<std::size_t> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (const std::size_t a : adjacency_[u]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && !seen[arc.to]) {
        seen[arc.to] = 1;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

std::vector<std::uint8_t> MaxFlow::sink_side(std::size_t sink) const {
  std::vector<std::uint8_t> seen(adjacency_.size(), 0);
  std::vector<std::size_t> stack{sink};
  seen[sink] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    // u can reach v when the arc u→v (the pair of v→u) has residual capacity.
    for (const std::size_t a : adjacency_[v]) {
      const std::size_t u = arcs_[a].to;
      if (arcs_[a ^ 1].residual > 0 && !seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace bubblecut
