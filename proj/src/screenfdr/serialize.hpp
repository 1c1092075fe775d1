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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "screenfdr/config_em.hpp"
#include "screenfdr/screen_pipeline.hpp"
#include "screenfdr/study_cluster.hpp"
#include "screenfdr/two_groups.hpp"

namespace sfdr {

using Json = nlohmann::ordered_json;

Json to_json(const TwoGroupsModel& model);
TwoGroupsModel model_from_json(const Json& j);

Json models_to_json(const std::vector<TwoGroupsModel>& models);
// Accepts a bare array or an object with a "models" array.
std::vector<TwoGroupsModel> models_from_json(const Json& j);

Json to_json(const StudyClustering& clustering);
StudyClustering clustering_from_json(const Json& j);

Json to_json(const ConfigState& state, const std::vector<std::string>& study_ids);

Json to_json(const StageTimes& times);

// Models, clustering, per-cluster EM diagnostics and stage timings.
Json screen_report(const ScreenResult& result);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace sfdr
