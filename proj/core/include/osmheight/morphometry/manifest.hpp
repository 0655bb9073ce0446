// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace osmheight::morphometry {

enum class FeatureLevel { building, street, block };
enum class Aggregator { none, total, mean, std, count };

std::string to_string(FeatureLevel level);
std::string to_string(Aggregator agg);

struct FeatureEntry {
  std::string name;
  FeatureLevel level = FeatureLevel::building;
  std::string base_feature;
  double buffer_m = 0.0;  // 0 = not a buffered aggregate
  Aggregator aggregator = Aggregator::none;
  /// Power of length in the feature's unit (2 = m^2, 1 = m, 0 =
  /// dimensionless, -1 = 1/m).
  int length_dim = 0;
};

/// Ordered, named column registry of a feature matrix. The hash is the
/// SHA-256 of the canonical JSON of (version, entries).
struct FeatureManifest {
  std::string version = "1";
  std::vector<FeatureEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::string hash() const;
  /// Throws FeatureError when absent.
  std::size_t index_of(const std::string& name) const;
  std::vector<std::size_t> indices_at_level(FeatureLevel level) const;

  nlohmann::json to_json() const;  // {version, hash, entries}
  static FeatureManifest from_json(const nlohmann::json& j);
};

/// Row-major n x m matrix of finite feature values, one row per building.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> building_ids, FeatureManifest manifest);

  std::size_t rows() const { return building_ids_.size(); }
  std::size_t cols() const { return manifest_.size(); }
  const std::vector<std::string>& building_ids() const { return building_ids_; }
  const FeatureManifest& manifest() const { return manifest_; }
  const std::string& manifest_hash() const { return manifest_hash_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  const std::vector<double>& values() const { return values_; }

  /// Row index of a building id, or npos.
  std::size_t find_row(const std::string& building_id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// CSV with header `building_id,<manifest names...>`; values printed in
  /// shortest round-trip form.
  std::string to_csv() const;
  void write(const std::filesystem::path& csv_path,
             const std::filesystem::path& manifest_path) const;
  /// Reads a CSV + manifest sidecar; verifies the header against the
  /// manifest and the sidecar hash against the entries (ContractError).
  static FeatureMatrix read(const std::filesystem::path& csv_path,
                            const std::filesystem::path& manifest_path);

 private:
  std::vector<std::string> building_ids_;
  FeatureManifest manifest_;
  std::string manifest_hash_;
  std::vector<double> values_;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace osmheight::morphometry
