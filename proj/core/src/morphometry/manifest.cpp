// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/morphometry/manifest.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "osmheight/errors.hpp"
#include "osmheight/hash.hpp"
#include "osmheight/json_file.hpp"

namespace osmheight::morphometry {

using nlohmann::json;

std::string to_string(FeatureLevel level) {
  switch (level) {
    case FeatureLevel::building:
      return "building";
    case FeatureLevel::street:
      return "street";
    case FeatureLevel::block:
      return "block";
  }
  return "building";
}

std::string to_string(Aggregator agg) {
  switch (agg) {
    case Aggregator::none:
      return "none";
    case Aggregator::total:
      return "total";
    case Aggregator::mean:
      return "mean";
    case Aggregator::std:
      return "std";
    case Aggregator::count:
      return "count";
  }
  return "none";
}

namespace {

FeatureLevel level_from(const std::string& s) {
  if (s == "building") return FeatureLevel::building;
  if (s == "street") return FeatureLevel::street;
  if (s == "block") return FeatureLevel::block;
  throw ContractError("unknown feature level '" + s + "'");
}

Aggregator aggregator_from(const std::string& s) {
  for (auto a : {Aggregator::none, Aggregator::total, Aggregator::mean, Aggregator::std,
                 Aggregator::count}) {
    if (to_string(a) == s) return a;
  }
  throw ContractError("unknown aggregator '" + s + "'");
}

json entries_json(const FeatureManifest& m) {
  json arr = json::array();
  for (const auto& e : m.entries) {
    arr.push_back({{"name", e.name},
                   {"level", to_string(e.level)},
                   {"base_feature", e.base_feature},
                   {"buffer_m", e.buffer_m},
                   {"aggregator", to_string(e.aggregator)},
                   {"length_dim", e.length_dim}});
  }
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string FeatureManifest::hash() const {
  const json canonical = {{"version", version}, {"entries", entries_json(*this)}};
  return sha256_hex(canonical.dump());
}

std::size_t FeatureManifest::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name == name) return i;
  }
  throw FeatureError("feature '" + name + "' not in manifest");
}

std::vector<std::size_t> FeatureManifest::indices_at_level(FeatureLevel level) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].level == level) out.push_back(i);
  }
  return out;
}

json FeatureManifest::to_json() const {
  return {{"version", version}, {"hash", hash()}, {"entries", entries_json(*this)}};
}

FeatureManifest FeatureManifest::from_json(const json& j) {
  FeatureManifest m;
  try {
    m.version = j.at("version").get<std::string>();
    std::unordered_set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      FeatureEntry entry;
      entry.name = e.at("name").get<std::string>();
      entry.level = level_from(e.at("level").get<std::string>());
      entry.base_feature = e.at("base_feature").get<std::string>();
      entry.buffer_m = e.at("buffer_m").get<double>();
      entry.aggregator = aggregator_from(e.at("aggregator").get<std::string>());
      entry.length_dim = e.value("length_dim", 0);
      if (!seen.insert(entry.name).second) {
        throw ContractError("duplicate feature name '" + entry.name + "'");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed feature manifest: ") + e.what());
  }
  if (j.contains("hash") && j["hash"].get<std::string>() != m.hash()) {
    throw ContractError("feature manifest hash does not match its entries");
  }
  return m;
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> building_ids, FeatureManifest manifest)
    : building_ids_(std::move(building_ids)),
      manifest_(std::move(manifest)),
      manifest_hash_(manifest_.hash()),
      values_(building_ids_.size() * manifest_.size(), 0.0) {}

std::size_t FeatureMatrix::find_row(const std::string& building_id) const {
  for (std::size_t i = 0; i < building_ids_.size(); ++i) {
    if (building_ids_[i] == building_id) return i;
  }
  return npos;
}

std::string FeatureMatrix::to_csv() const {
  std::string out = "building_id";
  for (const auto& e : manifest_.entries) {
    out += ',';
    out += e.name;
  }
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    out += building_ids_[r];
    for (double v : row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void FeatureMatrix::write(const std::filesystem::path& csv_path,
                          const std::filesystem::path& manifest_path) const {
  write_text_file(csv_path, to_csv());
  write_text_file(manifest_path, manifest_.to_json().dump(2) + "\n");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

FeatureMatrix FeatureMatrix::read(const std::filesystem::path& csv_path,
                                  const std::filesystem::path& manifest_path) {
  FeatureManifest manifest = FeatureManifest::from_json(read_json_file(manifest_path));
  std::istringstream in(read_text_file(csv_path));
  std::string line;
  if (!std::getline(in, line)) throw InputError(csv_path.string() + ": empty feature CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() != manifest.size() + 1 || header[0] != "building_id") {
    throw ContractError(csv_path.string() + ": header does not match feature manifest");
  }
  for (std::size_t c = 0; c < manifest.size(); ++c) {
    if (header[c + 1] != manifest.entries[c].name) {
      throw ContractError(csv_path.string() + ": column '" + header[c + 1] +
                          "' does not match manifest entry '" + manifest.entries[c].name + "'");
    }
  }
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw InputError(csv_path.string() + ": ragged row for " + cells[0]);
    }
    ids.push_back(cells[0]);
    std::vector<double> vals(manifest.size());
    for (std::size_t c = 0; c < manifest.size(); ++c) {
      const auto& s = cells[c + 1];
      auto res = std::from_chars(s.data(), s.data() + s.size(), vals[c]);
      if (res.ec != std::errc() || !std::isfinite(vals[c])) {
        throw InputError(csv_path.string() + ": bad value '" + s + "' for " + cells[0]);
      }
    }
    rows.push_back(std::move(vals));
  }
  FeatureMatrix m(std::move(ids), std::move(manifest));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), m.values_.begin() + r * m.cols());
  }
  return m;
}

}  // namespace osmheight::morphometry
