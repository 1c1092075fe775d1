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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfdr {

enum class FdrMethod { screen, screen_ind, repfdr_ub };

std::string_view to_string(FdrMethod method);

inline constexpr double kDefaultFdrCutoff = 0.2;

// Per-gene fdr_k for every k in [k_min, k_max]. values[k - k_min][gene].
struct FdrTable {
  std::vector<std::string> gene_ids;
  int k_min = 1;
  int k_max = 1;
  std::vector<std::vector<double>> values;
  FdrMethod method = FdrMethod::screen_ind;
  double cutoff = kDefaultFdrCutoff;

  const std::vector<double>& at_k(int k) const;
};

// Indices of genes with fdr <= cutoff, ascending.
std::vector<std::size_t> select_at_cutoff(std::span<const double> fdr, double cutoff);

// Header: gene, fdr_k<k> per k.
void write_fdr_table(std::ostream& out, const FdrTable& table);
void write_fdr_table(const std::filesystem::path& path, const FdrTable& table);

}  // namespace sfdr
