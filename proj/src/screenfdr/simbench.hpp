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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenfdr/stats_matrix.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

struct SimInstance {
  std::string scenario;  // s1 | s2 | dense
  StatsMatrix data;      // p-values for s1/s2, z-scores for dense
  std::vector<std::uint8_t> truth;  // n x m, row-major
  std::size_t n = 0;
  std::size_t m = 0;
  double x = 0.0;
  std::size_t clusters = 0;
  double r = 0.0;
  std::uint64_t seed = 0;

  bool is_nonnull(std::size_t gene, std::size_t study) const { return truth[gene * m + study] != 0; }
  std::vector<int> truth_counts() const;
};

struct Scenario1Options {
  std::size_t n = 5000;
  std::size_t m = 20;
  double x = 1000.0;
  std::uint64_t seed = 1;
  std::size_t nonnull_per_study = 300;
  std::size_t boosted_genes = 50;
  std::size_t boost_studies = 5;
};

struct Scenario2Options {
  std::size_t n = 5000;
  std::size_t m = 20;
  std::size_t clusters = 1;  // M; m must be divisible by M
  double r = 0.8;
  double x = 100.0;
  std::uint64_t seed = 1;
  double quantile = 0.94;
};

struct DenseOptions {
  std::size_t n = 5000;
  std::uint64_t seed = 1;
  std::size_t null_studies = 10;
  std::size_t indep_studies = 10;
  std::size_t cluster_studies = 10;
  double nonnull_fraction = 0.6;
  double r = 0.8;
  double effect_mean = 3.0;
  double effect_sd = 3.0;
};

SimInstance simulate_scenario1(const Scenario1Options& opts);
SimInstance simulate_scenario2(const Scenario2Options& opts);
SimInstance simulate_dense(const DenseOptions& opts);

struct EvalScore {
  int k = 0;
  double jaccard = 0.0;
  double fdp = 0.0;
  std::size_t n_selected = 0;
};

// truth_k = genes with at least k non-null studies.
EvalScore evaluate(std::span<const std::size_t> selected, std::span<const int> truth_counts, int k);

void write_truth(std::ostream& out, const SimInstance& sim);
std::vector<int> read_truth_counts(std::istream& in, std::vector<std::string>* gene_ids = nullptr);

enum class BenchMethod { fisher, exp_count, bh_count, screen_ind, repfdr_ub, screen };
std::string_view to_string(BenchMethod method);
BenchMethod parse_bench_method(std::string_view s);
std::vector<BenchMethod> all_bench_methods();

struct BenchSpec {
  std::string scenario = "s1";
  std::size_t n = 5000;
  std::size_t m = 20;
  double x = 1000.0;
  std::size_t clusters = 1;
  double r = 0.8;
  std::vector<std::uint64_t> seeds{1};
  std::vector<BenchMethod> methods = all_bench_methods();
  int k_min = 2;
  int k_max = 5;
  double cutoff = 0.2;
  std::size_t n_h = 512;
  int bootstrap = 100;
  double edge_threshold = 0.1;
  NullMode null_mode = NullMode::theoretical;
};

struct BenchRow {
  std::string scenario;
  int k = 0;
  std::string method;
  std::string seed;  // decimal seed, or "median"
  double jaccard = 0.0;
  double fdp = 0.0;
  double n_selected = 0.0;
};

SimInstance simulate(const BenchSpec& spec, std::uint64_t seed);

// Per-seed rows in (seed, method, k) order followed by median rows.
std::vector<BenchRow> run_benchmark(const BenchSpec& spec);

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace sfdr
