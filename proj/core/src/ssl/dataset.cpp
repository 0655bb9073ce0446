// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/dataset.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "osmheight/errors.hpp"
#include "osmheight/random.hpp"

namespace osmheight::ssl {

std::string to_string(LabelSource s) { return s == LabelSource::RAW ? "RAW" : "SVI"; }

void LabeledDataset::validate() const {
  if (building_ids.size() != y.size() || X.rows() != y.size() || source.size() != y.size()) {
    throw ContractError("labeled dataset columns have different lengths");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw ContractError("height for " + building_ids[i] + " is not positive");
    }
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.manifest_hash = manifest_hash;
  out.X = X.select_rows(rows);
  for (std::size_t r : rows) {
    out.building_ids.push_back(building_ids[r]);
    out.y.push_back(y[r]);
    out.source.push_back(source[r]);
  }
  return out;
}

std::size_t LabeledDataset::count(LabelSource s) const {
  return static_cast<std::size_t>(std::count(source.begin(), source.end(), s));
}

LabeledDataset make_dataset(const morphometry::FeatureMatrix& features,
                            std::span<const HeightLabel> labels, LabelSource source,
                            std::vector<std::string>* missing) {
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < features.rows(); ++r) row_of.emplace(features.building_ids()[r], r);
  LabeledDataset d;
  d.manifest_hash = features.manifest_hash();
  d.X = Matrix(0, features.cols());
  for (const auto& l : labels) {
    const auto it = row_of.find(l.building_id);
    if (it == row_of.end()) {
      if (missing) missing->push_back(l.building_id);
      continue;
    }
    d.building_ids.push_back(l.building_id);
    d.X.append_row(features.row(it->second));
    d.y.push_back(l.height);
    d.source.push_back(source);
  }
  d.validate();
  return d;
}

morphometry::FeatureMatrix select_level(const morphometry::FeatureMatrix& features,
                                        morphometry::FeatureLevel level) {
  const auto cols = features.manifest().indices_at_level(level);
  morphometry::FeatureManifest sub;
  sub.version = features.manifest().version;
  for (std::size_t c : cols) sub.entries.push_back(features.manifest().entries[c]);
  morphometry::FeatureMatrix out(features.building_ids(), std::move(sub));
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) out.at(r, k) = features.at(r, cols[k]);
  }
  return out;
}

namespace {

LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b) {
  LabeledDataset out = a;
  for (std::size_t r = 0; r < b.size(); ++r) {
    out.building_ids.push_back(b.building_ids[r]);
    out.X.append_row(b.X.row(r));
    out.y.push_back(b.y[r]);
    out.source.push_back(b.source[r]);
  }
  return out;
}

std::size_t rounded(double v) { return static_cast<std::size_t>(std::llround(v)); }

}  // namespace

LabeledDataset assemble_training_set(const LabeledDataset& raw, const LabeledDataset& pseudo,
                                     const TrainingMix& mix,
                                     std::optional<std::size_t> target_size) {
  if (!(mix.a >= 0.0 && mix.a <= 1.0)) throw ContractError("mix ratio a must lie in [0, 1]");
  if (raw.manifest_hash != pseudo.manifest_hash) {
    throw ContractError("RAW and pseudo-label datasets use different feature manifests");
  }
  const std::unordered_set<std::string> raw_ids(raw.building_ids.begin(), raw.building_ids.end());
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < pseudo.size(); ++r) {
    if (!raw_ids.contains(pseudo.building_ids[r])) keep.push_back(r);
  }
  const LabeledDataset svi = pseudo.subset(keep);

  auto need = [&](std::size_t n) {
    return std::pair{rounded((1.0 - mix.a) * static_cast<double>(n)),
                     rounded(mix.a * static_cast<double>(n))};
  };
  std::size_t n = 0;
  if (target_size) {
    n = *target_size;
    const auto [n_raw, n_svi] = need(n);
    if (n_raw > raw.size() || n_svi > svi.size()) {
      std::string msg = "training set of " + std::to_string(n) + " rows at a=" +
                        std::to_string(mix.a) + " is short by";
      if (n_raw > raw.size()) msg += " " + std::to_string(n_raw - raw.size()) + " RAW";
      if (n_svi > svi.size()) msg += " " + std::to_string(n_svi - svi.size()) + " SVI";
      throw AvailabilityError(msg + " rows");
    }
  } else {
    for (n = raw.size() + svi.size(); n > 0; --n) {
      const auto [n_raw, n_svi] = need(n);
      if (n_raw <= raw.size() && n_svi <= svi.size()) break;
    }
  }
  const auto [n_raw, n_svi] = need(n);
  Rng rng(mix.seed);
  const auto raw_rows = rng.sample(raw.size(), n_raw);
  const auto svi_rows = rng.sample(svi.size(), n_svi);
  LabeledDataset out = concat(raw.subset(raw_rows), svi.subset(svi_rows));
  out.manifest_hash = raw.manifest_hash;
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& d, double ratio,
                                                std::uint64_t seed) {
  if (d.size() < 10) throw ContractError("split needs at least 10 rows");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ContractError("split ratio must lie in (0, 1)");
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(seed);
  rng.shuffle(rows);
  const std::size_t n_train = rounded(ratio * static_cast<double>(d.size()));
  const std::span<const std::size_t> all(rows);
  return {d.subset(all.first(n_train)), d.subset(all.subspan(n_train))};
}

}  // namespace osmheight::ssl
