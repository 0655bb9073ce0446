// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/pipeline/config.hpp"

#include "osmheight/errors.hpp"
#include "osmheight/hash.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::cityjson:
      return "cityjson";
    case ExportFormat::obj:
      return "obj";
    case ExportFormat::both:
      return "both";
  }
  return "cityjson";
}

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "cityjson") return ExportFormat::cityjson;
  if (s == "obj") return ExportFormat::obj;
  if (s == "both") return ExportFormat::both;
  throw InputError("unknown export format '" + s + "' (cityjson, obj, both)");
}

json floor_config_to_json(const floors::FloorConfig& c) {
  return {{"min_confidence", c.cluster.min_confidence},
          {"degenerate_ratio", c.cluster.degenerate_ratio},
          {"floor_height_residential_m", c.heights.residential},
          {"floor_height_commercial_public_m", c.heights.commercial_public},
          {"floor_height_unknown_m", c.heights.unknown}};
}

floors::FloorConfig floor_config_from_json(const json& j) {
  floors::FloorConfig c;
  for (const auto& [k, v] : j.items()) {
    const double x = v.get<double>();
    if (k == "min_confidence") {
      c.cluster.min_confidence = x;
    } else if (k == "degenerate_ratio") {
      c.cluster.degenerate_ratio = x;
    } else if (k == "floor_height_residential_m") {
      c.heights.residential = x;
    } else if (k == "floor_height_commercial_public_m") {
      c.heights.commercial_public = x;
    } else if (k == "floor_height_unknown_m") {
      c.heights.unknown = x;
    } else {
      throw InputError("unknown floors config key '" + k + "'");
    }
  }
  if (c.cluster.min_confidence < 0.0 || c.cluster.min_confidence > 1.0) {
    throw InputError("floors.min_confidence must lie in [0, 1]");
  }
  if (!(c.cluster.degenerate_ratio >= 1.0)) throw InputError("floors.degenerate_ratio must be >= 1");
  for (double h : {c.heights.residential, c.heights.commercial_public, c.heights.unknown}) {
    if (!(h > 0.0)) throw InputError("floor heights must be positive");
  }
  return c;
}

namespace {

json paths_to_json(const PipelinePaths& p) {
  return {{"buildings", p.buildings.generic_string()},
          {"streets", p.streets.generic_string()},
          {"cameras", p.cameras.generic_string()},
          {"detections", p.detections.generic_string()},
          {"raw_labels", p.raw_labels.generic_string()},
          {"allowlist", p.allowlist.generic_string()},
          {"out_dir", p.out_dir.generic_string()}};
}

fs::path resolve(const json& v, const fs::path& base) {
  const fs::path p = v.get<std::string>();
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

json PipelineConfig::to_json() const {
  json regression_json = {{"model", regression.model.to_json()}, {"mix_a", regression.mix_a}};
  regression_json["training_size"] =
      regression.training_size ? json(*regression.training_size) : json(nullptr);
  return {{"paths", paths_to_json(paths)},
          {"morphometry", morphometry.to_json()},
          {"svi", {{"max_range_m", svi.max_range_m}}},
          {"floors", floor_config_to_json(floors)},
          {"regression", regression_json},
          {"lod1", lod1.to_json()},
          {"format", to_string(format)},
          {"seed", seed}};
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  PipelineConfig c;
  if (!j.is_object()) throw InputError("pipeline config must be a JSON object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "paths") {
        for (const auto& [pk, pv] : v.items()) {
          fs::path* slot = nullptr;
          if (pk == "buildings") slot = &c.paths.buildings;
          if (pk == "streets") slot = &c.paths.streets;
          if (pk == "cameras") slot = &c.paths.cameras;
          if (pk == "detections") slot = &c.paths.detections;
          if (pk == "raw_labels") slot = &c.paths.raw_labels;
          if (pk == "allowlist") slot = &c.paths.allowlist;
          if (pk == "out_dir") slot = &c.paths.out_dir;
          if (!slot) throw InputError("unknown paths key '" + pk + "'");
          if (!pv.is_null()) *slot = resolve(pv, base_dir);
        }
      } else if (k == "morphometry") {
        c.morphometry = morphometry::MorphometryConfig::from_json(v);
      } else if (k == "svi") {
        for (const auto& [sk, sv] : v.items()) {
          if (sk != "max_range_m") throw InputError("unknown svi config key '" + sk + "'");
          c.svi.max_range_m = sv.get<double>();
        }
        if (!(c.svi.max_range_m > 0.0)) throw InputError("svi.max_range_m must be positive");
      } else if (k == "floors") {
        c.floors = floor_config_from_json(v);
      } else if (k == "regression") {
        for (const auto& [rk, rv] : v.items()) {
          if (rk == "model") {
            c.regression.model = ssl::ModelSpec::from_json(rv);
          } else if (rk == "mix_a") {
            c.regression.mix_a = rv.get<double>();
          } else if (rk == "training_size") {
            if (!rv.is_null()) c.regression.training_size = rv.get<std::size_t>();
          } else {
            throw InputError("unknown regression config key '" + rk + "'");
          }
        }
        if (c.regression.mix_a < 0.0 || c.regression.mix_a > 1.0) {
          throw InputError("regression.mix_a must lie in [0, 1]");
        }
      } else if (k == "lod1") {
        c.lod1 = lod1::Lod1Config::from_json(v);
      } else if (k == "format") {
        c.format = export_format_from_string(v.get<std::string>());
      } else if (k == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else {
        throw InputError("unknown pipeline config key '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  return from_json(read_json_file(path), path.parent_path());
}

std::string PipelineConfig::hash() const {
  json j = to_json();
  j["paths"].erase("out_dir");
  return sha256_hex(j.dump());
}

void PipelineConfig::validate() const {
  if (paths.buildings.empty()) throw InputError("paths.buildings is required");
  if (paths.streets.empty()) throw InputError("paths.streets is required");
  for (const fs::path* p : {&paths.buildings, &paths.streets, &paths.cameras, &paths.detections,
                            &paths.raw_labels, &paths.allowlist}) {
    if (!p->empty() && !fs::exists(*p)) {
      throw InputError("input file does not exist: " + p->string());
    }
  }
  if (!paths.cameras.empty() && paths.detections.empty()) {
    throw InputError("paths.cameras requires paths.detections");
  }
}

}  // namespace osmheight::pipeline
