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
#include "screenfdr/serialize.hpp"

#include <fstream>
#include <map>

#include "screenfdr/error.hpp"

namespace sfdr {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::parse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const TwoGroupsModel& m) {
  return Json{{"study_id", m.study_id},
              {"pi0", m.pi0},
              {"null_sigma", m.null_sigma},
              {"nonnull_mu", m.nonnull_mu},
              {"nonnull_sigma", m.nonnull_sigma},
              {"power", m.power},
              {"null_mode", std::string(to_string(m.null_mode))},
              {"converged", m.converged},
              {"degenerate", m.degenerate},
              {"loglik", m.loglik},
              {"iterations", m.iterations}};
}

TwoGroupsModel model_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::parse, "model entry must be a JSON object");
  TwoGroupsModel m;
  m.study_id = field<std::string>(j, "study_id");
  m.pi0 = field<double>(j, "pi0");
  m.null_sigma = field<double>(j, "null_sigma");
  m.nonnull_mu = field<double>(j, "nonnull_mu");
  m.nonnull_sigma = field<double>(j, "nonnull_sigma");
  m.power = field<double>(j, "power");
  m.null_mode = parse_null_mode(field<std::string>(j, "null_mode"));
  m.converged = j.value("converged", true);
  m.degenerate = j.value("degenerate", false);
  m.loglik = j.value("loglik", 0.0);
  m.iterations = j.value("iterations", 0);
  if (!(m.pi0 >= 0.0 && m.pi0 <= 1.0)) fail(ErrorCode::parse, "model '" + m.study_id + "': pi0 outside [0,1]");
  if (!(m.null_sigma > 0.0 && m.nonnull_sigma > 0.0)) {
    fail(ErrorCode::parse, "model '" + m.study_id + "': scales must be positive");
  }
  if (!(m.power >= 0.0 && m.power <= 1.0)) fail(ErrorCode::parse, "model '" + m.study_id + "': power outside [0,1]");
  return m;
}

Json models_to_json(const std::vector<TwoGroupsModel>& models) {
  Json arr = Json::array();
  for (const auto& m : models) arr.push_back(to_json(m));
  return Json{{"models", arr}};
}

std::vector<TwoGroupsModel> models_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("models")) fail(ErrorCode::parse, "expected a 'models' array");
    arr = &j.at("models");
  }
  if (!arr->is_array()) fail(ErrorCode::parse, "models must be a JSON array");
  std::vector<TwoGroupsModel> out;
  for (const auto& e : *arr) out.push_back(model_from_json(e));
  return out;
}

Json to_json(const StudyClustering& c) {
  const std::size_t m = c.m();
  Json rows = Json::array();
  for (std::size_t i = 0; i < m; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m; ++j) row.push_back(c.r(i, j));
    rows.push_back(row);
  }
  Json clusters = Json::array();
  for (const auto& cl : c.clusters) {
    Json ids = Json::array();
    for (std::size_t s : cl) ids.push_back(c.study_ids[s]);
    clusters.push_back(ids);
  }
  return Json{{"study_ids", c.study_ids},
              {"correlations", rows},
              {"threshold", c.edge_threshold},
              {"clusters", clusters}};
}

StudyClustering clustering_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::parse, "clustering must be a JSON object");
  StudyClustering c;
  c.edge_threshold = j.value("threshold", 0.1);
  const auto clusters = field<std::vector<std::vector<std::string>>>(j, "clusters");
  if (j.contains("study_ids")) {
    c.study_ids = field<std::vector<std::string>>(j, "study_ids");
  } else {
    for (const auto& cl : clusters) c.study_ids.insert(c.study_ids.end(), cl.begin(), cl.end());
  }
  const std::size_t m = c.study_ids.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t s = 0; s < m; ++s) {
    if (!index.emplace(c.study_ids[s], s).second) {
      fail(ErrorCode::parse, "duplicate study id '" + c.study_ids[s] + "' in clustering");
    }
  }
  for (const auto& cl : clusters) {
    std::vector<std::size_t> members;
    for (const auto& id : cl) {
      const auto it = index.find(id);
      if (it == index.end()) fail(ErrorCode::parse, "unknown study id '" + id + "' in clusters");
      members.push_back(it->second);
    }
    c.clusters.push_back(std::move(members));
  }
  c.correlations.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) c.correlations[i * m + i] = 1.0;
  if (j.contains("correlations")) {
    const auto rows = field<std::vector<std::vector<double>>>(j, "correlations");
    if (rows.size() != m) fail(ErrorCode::parse, "correlation matrix must be m x m");
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m) fail(ErrorCode::parse, "correlation matrix must be m x m");
      for (std::size_t k = 0; k < m; ++k) c.correlations[i * m + k] = rows[i][k];
    }
  }
  return c;
}

Json to_json(const ConfigState& state, const std::vector<std::string>& study_ids) {
  Json studies = Json::array();
  for (std::size_t s : state.studies) studies.push_back(study_ids.at(s));
  Json rounds = Json::array();
  for (const auto& r : state.rounds) {
    rounds.push_back(Json{{"studies", r.studies},
                          {"configs", r.configs},
                          {"iterations", r.iterations},
                          {"converged", r.converged},
                          {"loglik", r.loglik}});
  }
  return Json{{"studies", studies},
              {"n_h", state.n_h},
              {"configs", state.configs.size()},
              {"exact", state.exact()},
              {"coverage", state.coverage},
              {"exclusion_bound", state.exclusion_bound},
              {"rounds", rounds}};
}

Json to_json(const StageTimes& t) {
  return Json{{"fit_seconds", t.fit_seconds},
              {"cluster_seconds", t.cluster_seconds},
              {"em_seconds", t.em_seconds},
              {"merge_seconds", t.merge_seconds},
              {"total_seconds", t.total_seconds}};
}

Json screen_report(const ScreenResult& result) {
  Json states = Json::array();
  for (const auto& s : result.cluster_states) {
    states.push_back(to_json(s, result.clustering.study_ids));
  }
  return Json{{"method", std::string(to_string(result.table.method))},
              {"k_min", result.table.k_min},
              {"k_max", result.table.k_max},
              {"cutoff", result.table.cutoff},
              {"models", models_to_json(result.models).at("models")},
              {"clustering", to_json(result.clustering)},
              {"cluster_em", states},
              {"runtime", to_json(result.times)}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, "'" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace sfdr
