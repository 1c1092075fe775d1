// Copyright 2026 The screenfdr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace sfdr {

// Undirected, unweighted graph over nodes [0, n).
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

using Partition = std::vector<std::vector<std::size_t>>;

// Sorted members, clusters ordered by their smallest member.
Partition canonical_partition(const std::vector<std::size_t>& labels);

Partition connected_components(const Graph& g);

// Two-level map equation (bits) of a node labeling on g, with node visit rates
// proportional to degree. Isolated nodes carry no flow.
double map_equation(const Graph& g, const std::vector<std::size_t>& labels);

struct InfomapOptions {
  int restarts = 10;
  std::uint64_t seed = 1;
};

// Minimizes the map equation with greedy node moves followed by module
// aggregation, repeated until no move helps; best of `restarts` seeded runs.
// Isolated nodes become singletons. Graphs with at most two edges fall back to
// connected components.
Partition infomap(const Graph& g, const InfomapOptions& opts = {});

}  // namespace sfdr
