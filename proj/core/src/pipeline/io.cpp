// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/pipeline/io.hpp"

#include "osmheight/hash.hpp"
#include "osmheight/json_file.hpp"

#ifndef OSMHEIGHT_VERSION
#define OSMHEIGHT_VERSION "0.0.0"
#endif

namespace osmheight::pipeline {

using nlohmann::json;

std::string version() { return OSMHEIGHT_VERSION; }

void StageRecord::input(const std::string& role, const std::filesystem::path& path) {
  if (!path.empty()) inputs[role] = sha256_file(path);
}

void StageRecord::output(const std::filesystem::path& path) {
  outputs[path.filename().string()] = sha256_file(path);
}

json RunManifest::to_json() const {
  json stages = json::array();
  json timings = json::object();
  for (const auto& s : stages_) {
    stages.push_back({{"stage", s.stage},
                      {"inputs", s.inputs},
                      {"outputs", s.outputs},
                      {"report", s.report}});
    timings[s.stage] = s.seconds;
  }
  return {{"tool", "osmheight"},
          {"version", version()},
          {"config_hash", config_hash_},
          {"seed", seed_},
          {"stages", stages},
          {"timings", timings}};
}

void RunManifest::write(const std::filesystem::path& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

}  // namespace osmheight::pipeline
