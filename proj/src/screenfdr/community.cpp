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
#include "screenfdr/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <limits>
#include <random>

#include "screenfdr/error.hpp"

namespace sfdr {
namespace {

double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

// Weighted graph used at every aggregation level. self[a] holds the weight of
// edges internal to super-node a.
struct Level {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self;
  std::vector<double> flow;  // degree / 2W
  std::vector<double> ext;   // weight to other super-nodes
};

struct ModuleStats {
  std::vector<double> flow;  // sum of member flow
  std::vector<double> exit;  // boundary weight / 2W
};

class MapState {
 public:
  MapState(const Level& lv, double two_w) : lv_(lv), two_w_(two_w) {
    label_.resize(lv.n);
    std::iota(label_.begin(), label_.end(), 0);
    mod_.flow = lv.flow;
    mod_.exit.resize(lv.n);
    for (std::size_t a = 0; a < lv.n; ++a) mod_.exit[a] = lv.ext[a] / two_w_;
    exit_total_ = std::accumulate(mod_.exit.begin(), mod_.exit.end(), 0.0);
    for (std::size_t a = 0; a < lv.n; ++a) {
      sum_plogp_exit_ += plogp(mod_.exit[a]);
      sum_plogp_exit_flow_ += plogp(mod_.exit[a] + mod_.flow[a]);
    }
  }

  // Only the module-dependent part; the node entropy term is constant.
  double codelength() const {
    return plogp(exit_total_) - 2.0 * sum_plogp_exit_ + sum_plogp_exit_flow_;
  }

  // Greedy sweep; returns true if any node moved.
  bool sweep(std::mt19937_64& rng) {
    std::vector<std::size_t> order(lv_.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    std::map<std::size_t, double> to_mod;
    for (std::size_t a : order) {
      to_mod.clear();
      for (const auto& [b, w] : lv_.adj[a]) to_mod[label_[b]] += w;
      const std::size_t from = label_[a];
      const double w_from = to_mod.count(from) ? to_mod[from] : 0.0;
      double best_delta = -1e-12;
      std::size_t best = from;
      for (const auto& [target, w_to] : to_mod) {
        if (target == from) continue;
        const double d = move_delta(a, from, target, w_from, w_to);
        if (d < best_delta || (d == best_delta && target < best)) {
          best_delta = d;
          best = target;
        }
      }
      if (best != from) {
        apply_move(a, from, best, w_from, to_mod[best]);
        moved = true;
      }
    }
    return moved;
  }

  const std::vector<std::size_t>& labels() const { return label_; }

 private:
  // New exit weights of the two modules after moving node a from -> to.
  std::pair<double, double> new_exits(std::size_t a, std::size_t from, std::size_t to,
                                      double w_from, double w_to) const {
    const double tot = lv_.ext[a];
    const double out_from = mod_.exit[from] * two_w_ - tot + 2.0 * w_from;
    const double out_to = mod_.exit[to] * two_w_ + tot - 2.0 * w_to;
    return {std::max(0.0, out_from) / two_w_, std::max(0.0, out_to) / two_w_};
  }

  double move_delta(std::size_t a, std::size_t from, std::size_t to, double w_from,
                    double w_to) const {
    const auto [q_from, q_to] = new_exits(a, from, to, w_from, w_to);
    const double p = lv_.flow[a];
    const double old_q_from = mod_.exit[from], old_q_to = mod_.exit[to];
    const double new_total = exit_total_ - old_q_from - old_q_to + q_from + q_to;
    const double d_exit = plogp(q_from) + plogp(q_to) - plogp(old_q_from) - plogp(old_q_to);
    const double d_exit_flow = plogp(q_from + mod_.flow[from] - p) + plogp(q_to + mod_.flow[to] + p) -
                               plogp(old_q_from + mod_.flow[from]) - plogp(old_q_to + mod_.flow[to]);
    return plogp(new_total) - plogp(exit_total_) - 2.0 * d_exit + d_exit_flow;
  }

  void apply_move(std::size_t a, std::size_t from, std::size_t to, double w_from, double w_to) {
    const auto [q_from, q_to] = new_exits(a, from, to, w_from, w_to);
    const double p = lv_.flow[a];
    sum_plogp_exit_ -= plogp(mod_.exit[from]) + plogp(mod_.exit[to]);
    sum_plogp_exit_flow_ -= plogp(mod_.exit[from] + mod_.flow[from]) + plogp(mod_.exit[to] + mod_.flow[to]);
    exit_total_ += q_from + q_to - mod_.exit[from] - mod_.exit[to];
    mod_.exit[from] = q_from;
    mod_.exit[to] = q_to;
    mod_.flow[from] -= p;
    mod_.flow[to] += p;
    sum_plogp_exit_ += plogp(mod_.exit[from]) + plogp(mod_.exit[to]);
    sum_plogp_exit_flow_ += plogp(mod_.exit[from] + mod_.flow[from]) + plogp(mod_.exit[to] + mod_.flow[to]);
    label_[a] = to;
  }

  const Level& lv_;
  double two_w_;
  std::vector<std::size_t> label_;
  ModuleStats mod_;
  double exit_total_ = 0.0;
  double sum_plogp_exit_ = 0.0;
  double sum_plogp_exit_flow_ = 0.0;
};

Level base_level(const Graph& g, const std::vector<std::size_t>& nodes,
                 const std::vector<std::size_t>& index, double two_w) {
  Level lv;
  lv.n = nodes.size();
  lv.adj.resize(lv.n);
  lv.self.assign(lv.n, 0.0);
  lv.ext.assign(lv.n, 0.0);
  lv.flow.assign(lv.n, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    const std::size_t a = index[u], b = index[v];
    w[{std::min(a, b), std::max(a, b)}] += 1.0;
  }
  for (const auto& [ab, weight] : w) {
    lv.adj[ab.first].emplace_back(ab.second, weight);
    lv.adj[ab.second].emplace_back(ab.first, weight);
    lv.ext[ab.first] += weight;
    lv.ext[ab.second] += weight;
  }
  for (std::size_t a = 0; a < lv.n; ++a) lv.flow[a] = lv.ext[a] / two_w;
  return lv;
}

// Collapse modules of lv into super-nodes; labels are relabeled densely.
Level aggregate(const Level& lv, std::vector<std::size_t>& labels, double two_w) {
  std::map<std::size_t, std::size_t> dense;
  for (std::size_t& l : labels) {
    auto it = dense.try_emplace(l, dense.size()).first;
    l = it->second;
  }
  Level up;
  up.n = dense.size();
  up.adj.resize(up.n);
  up.self.assign(up.n, 0.0);
  up.ext.assign(up.n, 0.0);
  up.flow.assign(up.n, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (std::size_t a = 0; a < lv.n; ++a) {
    up.self[labels[a]] += lv.self[a];
    up.flow[labels[a]] += lv.flow[a];
    for (const auto& [b, weight] : lv.adj[a]) {
      if (b < a) continue;
      const std::size_t x = labels[a], y = labels[b];
      if (x == y) {
        up.self[x] += weight;
      } else {
        w[{std::min(x, y), std::max(x, y)}] += weight;
      }
    }
  }
  for (const auto& [xy, weight] : w) {
    up.adj[xy.first].emplace_back(xy.second, weight);
    up.adj[xy.second].emplace_back(xy.first, weight);
    up.ext[xy.first] += weight;
    up.ext[xy.second] += weight;
  }
  (void)two_w;
  return up;
}

}  // namespace

Partition canonical_partition(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < labels.size(); ++v) groups[labels[v]].push_back(v);
  Partition out;
  for (auto& [label, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

Partition connected_components(const Graph& g) {
  std::vector<std::size_t> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : g.edges) {
    const std::size_t a = find(u), b = find(v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> labels(g.n);
  for (std::size_t v = 0; v < g.n; ++v) labels[v] = find(v);
  return canonical_partition(labels);
}

double map_equation(const Graph& g, const std::vector<std::size_t>& labels) {
  require(labels.size() == g.n, "label count does not match graph size");
  std::vector<double> degree(g.n, 0.0);
  double two_w = 0.0;
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    degree[u] += 1;
    degree[v] += 1;
    two_w += 2;
  }
  if (two_w == 0) return 0.0;
  std::map<std::size_t, double> exit, flow;
  for (std::size_t v = 0; v < g.n; ++v) flow[labels[v]] += degree[v] / two_w;
  for (const auto& [u, v] : g.edges) {
    if (u == v || labels[u] == labels[v]) continue;
    exit[labels[u]] += 1.0 / two_w;
    exit[labels[v]] += 1.0 / two_w;
  }
  double exit_total = 0.0, sum_exit = 0.0, sum_exit_flow = 0.0, node_term = 0.0;
  for (const auto& [mod, p] : flow) {
    const double q = exit.count(mod) ? exit[mod] : 0.0;
    exit_total += q;
    sum_exit += plogp(q);
    sum_exit_flow += plogp(q + p);
  }
  for (std::size_t v = 0; v < g.n; ++v) node_term += plogp(degree[v] / two_w);
  return plogp(exit_total) - 2.0 * sum_exit - node_term + sum_exit_flow;
}

Partition infomap(const Graph& g, const InfomapOptions& opts) {
  for (const auto& [u, v] : g.edges) require(u < g.n && v < g.n, "edge endpoint out of range");
  std::size_t proper_edges = 0;
  for (const auto& [u, v] : g.edges) proper_edges += (u != v);
  if (proper_edges <= 2) return connected_components(g);

  // Non-isolated nodes take part in the optimization.
  std::vector<double> degree(g.n, 0.0);
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    degree[u] += 1;
    degree[v] += 1;
  }
  std::vector<std::size_t> nodes, index(g.n, g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    if (degree[v] > 0) {
      index[v] = nodes.size();
      nodes.push_back(v);
    }
  }
  const double two_w = 2.0 * static_cast<double>(proper_edges);
  const Level base = base_level(g, nodes, index, two_w);

  std::vector<std::size_t> best_labels;
  double best_len = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);
  for (int run = 0; run < std::max(1, opts.restarts); ++run) {
    std::mt19937_64 run_rng(rng());
    std::vector<std::size_t> member(base.n);  // base node -> current super-node
    std::iota(member.begin(), member.end(), 0);
    Level lv = base;
    while (true) {
      MapState st(lv, two_w);
      bool any = false;
      while (st.sweep(run_rng)) any = true;
      if (!any) break;
      std::vector<std::size_t> labels = st.labels();
      Level up = aggregate(lv, labels, two_w);
      for (std::size_t& mbr : member) mbr = labels[mbr];
      lv = std::move(up);
      if (lv.n == 1) break;
    }
    std::vector<std::size_t> full(g.n);
    for (std::size_t v = 0; v < g.n; ++v) {
      full[v] = index[v] < g.n ? member[index[v]] : base.n + v;
    }
    const double len = map_equation(g, full);
    if (len < best_len - 1e-12) {
      best_len = len;
      best_labels = full;
    }
  }
  return canonical_partition(best_labels);
}

}  // namespace sfdr
