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
#include "screenfdr/fdr_table.hpp"

#include <fstream>
#include <ostream>

#include "screenfdr/error.hpp"
#include "screenfdr/stats_matrix.hpp"

namespace sfdr {

std::string_view to_string(FdrMethod method) {
  switch (method) {
    case FdrMethod::screen: return "screen";
    case FdrMethod::screen_ind: return "screen_ind";
    case FdrMethod::repfdr_ub: return "repfdr_ub";
  }
  return "unknown";
}

const std::vector<double>& FdrTable::at_k(int k) const {
  if (k < k_min || k > k_max) {
    fail(ErrorCode::out_of_range, "k=" + std::to_string(k) + " outside table range [" +
                                      std::to_string(k_min) + "," + std::to_string(k_max) + "]");
  }
  return values[static_cast<std::size_t>(k - k_min)];
}

std::vector<std::size_t> select_at_cutoff(std::span<const double> fdr, double cutoff) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fdr.size(); ++i) {
    if (fdr[i] <= cutoff) out.push_back(i);
  }
  return out;
}

void write_fdr_table(std::ostream& out, const FdrTable& table) {
  out << "gene";
  for (int k = table.k_min; k <= table.k_max; ++k) out << "\tfdr_k" << k;
  out << '\n';
  for (std::size_t i = 0; i < table.gene_ids.size(); ++i) {
    out << table.gene_ids[i];
    for (const auto& col : table.values) out << '\t' << format_double(col[i]);
    out << '\n';
  }
}

void write_fdr_table(const std::filesystem::path& path, const FdrTable& table) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  write_fdr_table(out, table);
}

}  // namespace sfdr
