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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfdr {

enum class Scale { pvalue, zscore };
enum class Tail { one_sided, two_sided_abs };

// P-values are clamped into [kPMin, 1 - kPMin] before any quantile transform.
inline constexpr double kPMin = 1e-15;

std::string_view to_string(Scale s);
std::string_view to_string(Tail t);
Scale parse_scale(std::string_view s);
Tail parse_tail(std::string_view s);

// n genes x m studies, row-major.
struct StatsMatrix {
  std::vector<std::string> gene_ids;
  std::vector<std::string> study_ids;
  std::vector<double> values;
  Scale scale = Scale::pvalue;
  // Tail convention used when this matrix was produced by a conversion.
  std::optional<Tail> tail;

  std::size_t n_genes() const { return gene_ids.size(); }
  std::size_t n_studies() const { return study_ids.size(); }

  double operator()(std::size_t gene, std::size_t study) const {
    return values[gene * study_ids.size() + study];
  }
  double& operator()(std::size_t gene, std::size_t study) {
    return values[gene * study_ids.size() + study];
  }

  std::vector<double> column(std::size_t study) const;

  // Submatrix restricted to the given gene rows (duplicates allowed).
  StatsMatrix select_rows(const std::vector<std::size_t>& rows) const;
};

// Throws Error on broken invariants (dimensions, unique ids, p-value range).
void validate(const StatsMatrix& matrix);

// Tab-separated; first row holds study ids after a leading "gene" cell, first
// column holds gene ids. P-values must lie in [0, 1] and are clamped into
// [kPMin, 1 - kPMin]; anything outside [0, 1] is rejected.
StatsMatrix load_matrix(const std::filesystem::path& path, Scale scale);
StatsMatrix parse_matrix(std::istream& in, Scale scale,
                         std::string_view source = "<stream>");

void write_matrix(std::ostream& out, const StatsMatrix& matrix);
void write_matrix(const std::filesystem::path& path, const StatsMatrix& matrix);

double pvalue_to_zscore(double p, Tail tail);
double zscore_to_pvalue(double z, Tail tail);

StatsMatrix pvalues_to_zscores(const StatsMatrix& p, Tail tail);
StatsMatrix zscores_to_pvalues(const StatsMatrix& z, Tail tail);

// Shortest round-trip decimal representation used by every text writer.
std::string format_double(double v);

}  // namespace sfdr
