// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#include "osmheight/ssl/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "osmheight/errors.hpp"
#include "osmheight/json_file.hpp"
#include "osmheight/random.hpp"

namespace osmheight::ssl {

using nlohmann::json;

std::string to_string(TrainingSetKind s) {
  switch (s) {
    case TrainingSetKind::SVI:
      return "SVI";
    case TrainingSetKind::RAW:
      return "RAW";
    case TrainingSetKind::SSL:
      return "SSL";
  }
  return "RAW";
}

std::string to_string(FeatureSubset s) { return s == FeatureSubset::all ? "all" : "building"; }

namespace {

TrainingSetKind set_from(const std::string& s) {
  if (s == "SVI") return TrainingSetKind::SVI;
  if (s == "RAW") return TrainingSetKind::RAW;
  if (s == "SSL") return TrainingSetKind::SSL;
  throw InputError("unknown training set '" + s + "' (expected SVI, RAW or SSL)");
}

FeatureSubset subset_from(const std::string& s) {
  if (s == "all") return FeatureSubset::all;
  if (s == "building") return FeatureSubset::building;
  throw InputError("unknown feature subset '" + s + "' (expected all or building)");
}

// Fixed offsets keep the streams for validation, budgets and mixing apart.
constexpr std::uint64_t kValidationStream = 1;
constexpr std::uint64_t kRawBudgetStream = 2;
constexpr std::uint64_t kSviBudgetStream = 3;
constexpr std::uint64_t kMixStream = 4;
constexpr std::uint64_t kModelStream = 5;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng::derive(seed, stream).next();
}

std::vector<HeightLabel> pick(std::span<const HeightLabel> labels,
                              std::span<const std::size_t> rows) {
  std::vector<HeightLabel> out;
  for (std::size_t r : rows) out.push_back(labels[r]);
  return out;
}

std::vector<HeightLabel> excluding(std::span<const HeightLabel> labels,
                                   const std::unordered_set<std::string>& ids) {
  std::vector<HeightLabel> out;
  for (const auto& l : labels) {
    if (!ids.contains(l.building_id)) out.push_back(l);
  }
  return out;
}

std::vector<HeightLabel> budgeted(std::vector<HeightLabel> labels, std::optional<std::size_t> budget,
                                  std::uint64_t seed, const char* what) {
  if (!budget) return labels;
  if (*budget > labels.size()) {
    throw AvailabilityError(std::string(what) + " budget of " + std::to_string(*budget) +
                            " exceeds the " + std::to_string(labels.size()) + " available labels");
  }
  Rng rng(seed);
  return pick(labels, rng.sample(labels.size(), *budget));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

json ExperimentConfig::to_json() const {
  json kinds_json = json::array();
  for (const auto& k : kinds) kinds_json.push_back(k.to_json());
  json sets_json = json::array();
  for (auto s : sets) sets_json.push_back(to_string(s));
  json subsets_json = json::array();
  for (auto s : feature_subsets) subsets_json.push_back(to_string(s));
  json j = {{"kinds", kinds_json},
            {"sets", sets_json},
            {"feature_subsets", subsets_json},
            {"mix", {{"a", mix_a}}},
            {"seeds", seeds},
            {"split_ratio", split_ratio},
            {"protocol", protocol == Protocol::holdout ? "holdout" : "split"},
            {"validation_size", validation_size},
            {"raw_budget", raw_budget ? json(*raw_budget) : json()},
            {"svi_budget", svi_budget ? json(*svi_budget) : json()}};
  if (validation_ids) j["validation_ids"] = *validation_ids;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  static const std::set<std::string> kKeys = {
      "kinds",          "hyperparameters", "sets",       "feature_subsets", "mix",
      "seeds",          "split_ratio",     "protocol",   "validation_ids",  "validation_size",
      "raw_budget",     "svi_budget"};
  if (!j.is_object()) throw InputError("experiment config must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!kKeys.contains(k)) throw InputError("unknown experiment config key '" + k + "'");
  }
  ExperimentConfig c;
  try {
    // Kind-level hyperparameters apply to kinds given by name only.
    const json hyper = j.value("hyperparameters", json::object());
    for (const auto& k : j.value("kinds", json::array())) {
      if (k.is_string() && hyper.contains(k.get<std::string>())) {
        c.kinds.push_back(ModelSpec::from_json(
            {{"kind", k}, {"hyperparameters", hyper[k.get<std::string>()]}}));
      } else {
        c.kinds.push_back(ModelSpec::from_json(k));
      }
    }
    if (c.kinds.empty()) c.kinds.push_back(ModelSpec{});
    if (j.contains("sets")) {
      c.sets.clear();
      for (const auto& s : j["sets"]) c.sets.push_back(set_from(s.get<std::string>()));
    }
    if (j.contains("feature_subsets")) {
      c.feature_subsets.clear();
      for (const auto& s : j["feature_subsets"]) c.feature_subsets.push_back(subset_from(s.get<std::string>()));
    }
    if (j.contains("mix")) c.mix_a = j["mix"].at("a").get<double>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.split_ratio = j.value("split_ratio", c.split_ratio);
    const std::string protocol = j.value("protocol", "holdout");
    if (protocol == "holdout") {
      c.protocol = Protocol::holdout;
    } else if (protocol == "split") {
      c.protocol = Protocol::split;
    } else {
      throw InputError("protocol must be holdout or split");
    }
    if (j.contains("validation_ids") && !j["validation_ids"].is_null()) {
      c.validation_ids = j["validation_ids"].get<std::vector<std::string>>();
    }
    c.validation_size = j.value("validation_size", c.validation_size);
    if (j.contains("raw_budget") && !j["raw_budget"].is_null()) c.raw_budget = j["raw_budget"].get<std::size_t>();
    if (j.contains("svi_budget") && !j["svi_budget"].is_null()) c.svi_budget = j["svi_budget"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad experiment config: ") + e.what());
  }
  if (!(c.mix_a >= 0.0 && c.mix_a <= 1.0)) throw InputError("mix.a must lie in [0, 1]");
  if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) throw InputError("split_ratio must lie in (0, 1)");
  if (c.seeds.empty() || c.sets.empty() || c.feature_subsets.empty()) {
    throw InputError("seeds, sets and feature_subsets must not be empty");
  }
  return c;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "seed,features,kind,set,mae,rmse,r2,n_train,n_validation,solver\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.features << ',' << r.kind << ',' << r.set << ','
        << morphometry::format_double(r.mae) << ',' << morphometry::format_double(r.rmse) << ','
        << morphometry::format_double(r.r2) << ',' << r.n_train << ',' << r.n_validation << ','
        << r.solver << '\n';
  }
  return out.str();
}

json ExperimentReport::to_json() const {
  json rows_json = json::array();
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<const ExperimentRow*>> cells;
  for (const auto& r : rows) {
    rows_json.push_back({{"seed", r.seed},
                         {"features", r.features},
                         {"kind", r.kind},
                         {"set", r.set},
                         {"mae", r.mae},
                         {"rmse", r.rmse},
                         {"r2", r.r2},
                         {"n_train", r.n_train},
                         {"n_validation", r.n_validation},
                         {"solver", r.solver}});
    cells[{r.features, r.kind, r.set}].push_back(&r);
  }
  json summary = json::array();
  for (const auto& [key, rs] : cells) {
    std::vector<double> mae, rmse, r2;
    for (const auto* r : rs) {
      mae.push_back(r->mae);
      rmse.push_back(r->rmse);
      r2.push_back(r->r2);
    }
    summary.push_back({{"features", std::get<0>(key)},
                       {"kind", std::get<1>(key)},
                       {"set", std::get<2>(key)},
                       {"n_seeds", rs.size()},
                       {"median_mae", median(mae)},
                       {"median_rmse", median(rmse)},
                       {"median_r2", median(r2)}});
  }
  return {{"config", config}, {"rows", rows_json}, {"summary", summary}};
}

ExperimentReport run_experiment(const morphometry::FeatureMatrix& features,
                                std::span<const HeightLabel> raw_labels,
                                std::span<const HeightLabel> pseudo_labels,
                                const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config.to_json();

  for (std::uint64_t seed : config.seeds) {
    // Label pools for this seed.
    std::vector<HeightLabel> validation, raw_pool, svi_pool;
    if (config.protocol == Protocol::holdout) {
      if (config.validation_ids) {
        const std::unordered_set<std::string> ids(config.validation_ids->begin(),
                                                  config.validation_ids->end());
        for (const auto& l : raw_labels) {
          if (ids.contains(l.building_id)) validation.push_back(l);
        }
        if (validation.size() != ids.size()) {
          throw AvailabilityError(std::to_string(ids.size() - validation.size()) +
                                  " validation ids have no RAW label");
        }
      } else {
        if (config.validation_size >= raw_labels.size()) {
          throw AvailabilityError("validation_size " + std::to_string(config.validation_size) +
                                  " leaves no RAW labels for training (have " +
                                  std::to_string(raw_labels.size()) + ")");
        }
        Rng rng(stream_seed(seed, kValidationStream));
        validation = pick(raw_labels, rng.sample(raw_labels.size(), config.validation_size));
      }
      std::unordered_set<std::string> held;
      for (const auto& l : validation) held.insert(l.building_id);
      raw_pool = excluding(raw_labels, held);
      svi_pool = excluding(pseudo_labels, held);
    } else {
      raw_pool.assign(raw_labels.begin(), raw_labels.end());
      svi_pool.assign(pseudo_labels.begin(), pseudo_labels.end());
    }
    raw_pool = budgeted(std::move(raw_pool), config.raw_budget, stream_seed(seed, kRawBudgetStream), "RAW");
    if (config.raw_budget) {
      // Budgeted pools are disjoint so the mix really adds buildings.
      std::unordered_set<std::string> drawn;
      for (const auto& l : raw_pool) drawn.insert(l.building_id);
      svi_pool = excluding(svi_pool, drawn);
    }
    svi_pool = budgeted(std::move(svi_pool), config.svi_budget, stream_seed(seed, kSviBudgetStream), "SVI");

    for (FeatureSubset subset : config.feature_subsets) {
      const morphometry::FeatureMatrix fm =
          subset == FeatureSubset::all ? features
                                       : select_level(features, morphometry::FeatureLevel::building);
      const LabeledDataset raw = make_dataset(fm, raw_pool, LabelSource::RAW);
      const LabeledDataset svi = make_dataset(fm, svi_pool, LabelSource::SVI);
      const LabeledDataset val = make_dataset(fm, validation, LabelSource::RAW);

      for (TrainingSetKind set : config.sets) {
        LabeledDataset train_set;
        switch (set) {
          case TrainingSetKind::RAW:
            train_set = raw;
            break;
          case TrainingSetKind::SVI:
            train_set = svi;
            break;
          case TrainingSetKind::SSL:
            train_set = assemble_training_set(raw, svi, {config.mix_a, stream_seed(seed, kMixStream)});
            break;
        }
        LabeledDataset eval_set = val;
        if (config.protocol == Protocol::split) {
          auto parts = split(train_set, config.split_ratio, seed);
          train_set = std::move(parts.first);
          eval_set = std::move(parts.second);
        }
        for (const ModelSpec& base : config.kinds) {
          ModelSpec spec = base;
          spec.seed = stream_seed(seed ^ base.seed, kModelStream);
          const TrainedModel model = train(spec, train_set);
          const auto pred = model.predict(eval_set.X, eval_set.manifest_hash);
          const Metrics m = evaluate(pred, eval_set.y);
          report.rows.push_back({seed, to_string(subset), to_string(spec.kind), to_string(set), m.mae,
                                 m.rmse, m.r2, train_set.size(), eval_set.size(), spec.solver()});
        }
      }
    }
  }
  return report;
}

std::vector<HeightLabel> read_height_labels_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  auto cells_of = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty label file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = cells_of(line);
  const auto id_col = std::find(header.begin(), header.end(), "building_id");
  const auto h_col = std::find(header.begin(), header.end(), "height_m");
  if (id_col == header.end() || h_col == header.end()) {
    throw InputError(path.string() + ": label CSV needs building_id and height_m columns");
  }
  const std::size_t ic = static_cast<std::size_t>(id_col - header.begin());
  const std::size_t hc = static_cast<std::size_t>(h_col - header.begin());
  std::vector<HeightLabel> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = cells_of(line);
    if (cells.size() <= std::max(ic, hc)) throw InputError(path.string() + ": short row '" + line + "'");
    HeightLabel l{cells[ic], 0.0};
    const auto& s = cells[hc];
    if (std::from_chars(s.data(), s.data() + s.size(), l.height).ec != std::errc() || !(l.height > 0.0)) {
      throw InputError(path.string() + ": bad height '" + s + "' for " + l.building_id);
    }
    out.push_back(std::move(l));
  }
  return out;
}

void write_height_labels_csv(const std::filesystem::path& path, std::span<const HeightLabel> labels) {
  std::string out = "building_id,height_m\n";
  for (const auto& l : labels) out += l.building_id + "," + morphometry::format_double(l.height) + "\n";
  write_text_file(path, out);
}

}  // namespace osmheight::ssl
