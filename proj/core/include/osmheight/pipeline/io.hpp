// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace osmheight::pipeline {

/// Library version string, e.g. "0.1.0".
std::string version();

/// What one stage read and wrote, by content hash.
struct StageRecord {
  std::string stage;
  std::map<std::string, std::string> inputs;   // role -> sha256
  std::map<std::string, std::string> outputs;  // file name -> sha256
  nlohmann::json report = nlohmann::json::object();
  double seconds = 0.0;

  /// Hashes `path` under `role`; empty paths are ignored.
  void input(const std::string& role, const std::filesystem::path& path);
  /// Hashes a written file under its file name.
  void output(const std::filesystem::path& path);
};

/// {tool, version, config_hash, seed, stages, timings}. Everything except
/// `timings` depends only on inputs and configuration.
class RunManifest {
 public:
  RunManifest() = default;
  RunManifest(std::string config_hash, std::uint64_t seed)
      : config_hash_(std::move(config_hash)), seed_(seed) {}

  void add(StageRecord r) { stages_.push_back(std::move(r)); }
  const std::vector<StageRecord>& stages() const { return stages_; }
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string config_hash_;
  std::uint64_t seed_ = 0;
  std::vector<StageRecord> stages_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace osmheight::pipeline
