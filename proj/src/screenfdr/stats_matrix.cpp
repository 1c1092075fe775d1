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
#include "screenfdr/stats_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "screenfdr/error.hpp"
#include "screenfdr/normal.hpp"

namespace sfdr {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::string where(std::string_view source, std::size_t line, std::size_t col) {
  std::ostringstream os;
  os << source << ": row " << line << ", column " << col;
  return os.str();
}

void check_unique(const std::vector<std::string>& ids, std::string_view what,
                  std::string_view source) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      fail(ErrorCode::parse, std::string(source) + ": duplicate " +
                                 std::string(what) + " id '" + id + "'");
    }
  }
}

double clamp_p(double p) { return std::clamp(p, kPMin, 1.0 - kPMin); }

}  // namespace

std::string_view to_string(Scale s) {
  return s == Scale::pvalue ? "pvalue" : "zscore";
}

std::string_view to_string(Tail t) {
  return t == Tail::one_sided ? "one_sided" : "two_sided_abs";
}

Scale parse_scale(std::string_view s) {
  if (s == "pvalue") return Scale::pvalue;
  if (s == "zscore") return Scale::zscore;
  fail(ErrorCode::invalid_argument, "unknown scale '" + std::string(s) + "'");
}

Tail parse_tail(std::string_view s) {
  if (s == "one_sided") return Tail::one_sided;
  if (s == "two_sided_abs") return Tail::two_sided_abs;
  fail(ErrorCode::invalid_argument, "unknown tail '" + std::string(s) + "'");
}

std::vector<double> StatsMatrix::column(std::size_t study) const {
  std::vector<double> out(n_genes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, study);
  return out;
}

StatsMatrix StatsMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  StatsMatrix out;
  out.study_ids = study_ids;
  out.scale = scale;
  out.tail = tail;
  const std::size_t m = n_studies();
  out.gene_ids.reserve(rows.size());
  out.values.reserve(rows.size() * m);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    // Resampled rows may repeat; suffix keeps ids unique.
    out.gene_ids.push_back(gene_ids.at(rows[r]) + "#" + std::to_string(r));
    out.values.insert(out.values.end(), values.begin() + rows[r] * m,
                      values.begin() + (rows[r] + 1) * m);
  }
  return out;
}

void validate(const StatsMatrix& matrix) {
  require(matrix.n_genes() >= 1, "matrix has no genes");
  require(matrix.n_studies() >= 1, "matrix has no studies");
  require(matrix.values.size() == matrix.n_genes() * matrix.n_studies(),
          "matrix value count does not match dimensions");
  check_unique(matrix.gene_ids, "gene", "matrix");
  check_unique(matrix.study_ids, "study", "matrix");
  for (std::size_t i = 0; i < matrix.n_genes(); ++i) {
    for (std::size_t j = 0; j < matrix.n_studies(); ++j) {
      const double v = matrix(i, j);
      if (!std::isfinite(v)) {
        fail(ErrorCode::out_of_range, where("matrix", i + 2, j + 2) + ": non-finite value");
      }
      if (matrix.scale == Scale::pvalue && !(v > 0.0 && v < 1.0)) {
        fail(ErrorCode::out_of_range,
             where("matrix", i + 2, j + 2) + ": p-value outside (0,1)");
      }
    }
  }
}

StatsMatrix parse_matrix(std::istream& in, Scale scale, std::string_view source) {
  StatsMatrix out;
  out.scale = scale;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(ErrorCode::parse, std::string(source) + ": empty input");
  ++line_no;
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  {
    const auto header = split_tabs(line);
    if (header.size() < 2 || trim(header[0]) != "gene") {
      fail(ErrorCode::parse, std::string(source) +
                                 ": malformed header (expected 'gene' followed by study ids)");
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
      const auto id = trim(header[c]);
      if (id.empty()) fail(ErrorCode::parse, where(source, 1, c + 1) + ": empty study id");
      out.study_ids.emplace_back(id);
    }
  }
  check_unique(out.study_ids, "study", source);
  const std::size_t m = out.study_ids.size();

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != m + 1) {
      fail(ErrorCode::parse, std::string(source) + ": row " + std::to_string(line_no) +
                                 " has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(m + 1));
    }
    out.gene_ids.emplace_back(trim(cells[0]));
    if (out.gene_ids.back().empty()) {
      fail(ErrorCode::parse, where(source, line_no, 1) + ": empty gene id");
    }
    for (std::size_t c = 1; c <= m; ++c) {
      const auto cell = trim(cells[c]);
      double v = 0.0;
      const auto* first = cell.data();
      const auto* last = cell.data() + cell.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        if (ec == std::errc::result_out_of_range && ptr == last) {
          // Denormal-range values such as 1e-400 round to zero.
          v = 0.0;
        } else {
          fail(ErrorCode::parse, where(source, line_no, c + 1) + ": non-numeric value '" +
                                     std::string(cell) + "'");
        }
      }
      if (!std::isfinite(v)) {
        fail(ErrorCode::out_of_range, where(source, line_no, c + 1) + ": non-finite value");
      }
      if (scale == Scale::pvalue) {
        if (v < 0.0 || v > 1.0) {
          fail(ErrorCode::out_of_range, where(source, line_no, c + 1) + ": p-value " +
                                            std::string(cell) + " outside [0,1]");
        }
        v = clamp_p(v);
      }
      out.values.push_back(v);
    }
  }
  if (out.gene_ids.empty()) fail(ErrorCode::parse, std::string(source) + ": no data rows");
  check_unique(out.gene_ids, "gene", source);
  return out;
}

StatsMatrix load_matrix(const std::filesystem::path& path, Scale scale) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  return parse_matrix(in, scale, path.string());
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const StatsMatrix& matrix) {
  out << "gene";
  for (const auto& s : matrix.study_ids) out << '\t' << s;
  out << '\n';
  for (std::size_t i = 0; i < matrix.n_genes(); ++i) {
    out << matrix.gene_ids[i];
    for (std::size_t j = 0; j < matrix.n_studies(); ++j) out << '\t' << format_double(matrix(i, j));
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const StatsMatrix& matrix) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  write_matrix(out, matrix);
}

double pvalue_to_zscore(double p, Tail tail) {
  p = clamp_p(p);
  return tail == Tail::one_sided ? stats::norm_isf(p) : stats::norm_isf(0.5 * p);
}

double zscore_to_pvalue(double z, Tail tail) {
  return tail == Tail::one_sided ? stats::norm_sf(z) : 2.0 * stats::norm_sf(std::fabs(z));
}

StatsMatrix pvalues_to_zscores(const StatsMatrix& p, Tail tail) {
  require(p.scale == Scale::pvalue, "pvalues_to_zscores expects a p-value matrix");
  StatsMatrix z = p;
  z.scale = Scale::zscore;
  z.tail = tail;
  for (double& v : z.values) v = pvalue_to_zscore(v, tail);
  return z;
}

StatsMatrix zscores_to_pvalues(const StatsMatrix& z, Tail tail) {
  require(z.scale == Scale::zscore, "zscores_to_pvalues expects a z-score matrix");
  StatsMatrix p = z;
  p.scale = Scale::pvalue;
  p.tail = tail;
  for (double& v : p.values) v = clamp_p(zscore_to_pvalue(v, tail));
  return p;
}

}  // namespace sfdr
