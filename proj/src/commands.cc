/* Copyright 2026 The KGCN Recommender Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "kgcn/commands.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <spdlog/spdlog.h>

#include "csv.h"
#include "kgcn/checkpoint.h"
#include "kgcn/error.h"
#include "kgcn/kg_store.h"
#include "text_io.h"

namespace kgcn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void RequireFile(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw IoError(std::string(what) + " not found: " + path.string());
  }
}

void WriteIndexTable(const fs::path& path, const std::vector<std::string>& tokens) {
  auto out = internal::OpenForWrite(path);
  for (std::size_t i = 0; i < tokens.size(); ++i) out << i << '\t' << tokens[i] << '\n';
  if (!out) throw IoError("write failure on " + path.string());
}

// Run metadata stored next to each checkpoint: everything needed to rebuild
// the neighbor sample and find the split files.
struct RunMeta {
  ModelConfig model;
  std::uint64_t seed = 0;
  std::size_t num_kg_relations = 0;
  std::size_t num_items = 0;
  fs::path kg;
  fs::path train;
  fs::path validation;
  fs::path test;
};

void WriteMeta(const fs::path& path, const RunMeta& m) {
  json j;
  j["model"] = ModelKindName(m.model.kind);
  j["K"] = m.model.neighbor_sample;
  j["d"] = m.model.dim;
  j["H"] = m.model.depth;
  j["aggregator"] = AggregatorName(m.model.aggregator);
  j["uniform_weights"] = m.model.uniform_weights;
  j["seed"] = m.seed;
  j["num_kg_relations"] = m.num_kg_relations;
  j["num_items"] = m.num_items;
  j["kg"] = m.kg.string();
  j["train"] = m.train.string();
  j["validation"] = m.validation.string();
  j["test"] = m.test.string();
  auto out = internal::OpenForWrite(path);
  out << j.dump(2) << '\n';
}

RunMeta ReadMeta(const fs::path& path) {
  auto in = internal::OpenForRead(path);
  try {
    const json j = json::parse(in);
    RunMeta m;
    m.model.kind = ParseModelKind(j.at("model").get<std::string>());
    m.model.neighbor_sample = j.at("K").get<std::size_t>();
    m.model.dim = j.at("d").get<std::size_t>();
    m.model.depth = j.at("H").get<std::size_t>();
    m.model.aggregator = ParseAggregator(j.at("aggregator").get<std::string>());
    m.model.uniform_weights = j.at("uniform_weights").get<bool>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.num_kg_relations = j.at("num_kg_relations").get<std::size_t>();
    m.num_items = j.at("num_items").get<std::size_t>();
    m.kg = j.at("kg").get<std::string>();
    m.train = j.at("train").get<std::string>();
    m.validation = j.at("validation").get<std::string>();
    m.test = j.at("test").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw DataError("bad run metadata " + path.string() + ": " + e.what());
  }
}

fs::path MetaPath(const fs::path& checkpoint) {
  return fs::path(checkpoint.string() + ".json");
}

// A checkpoint plus its metadata, neighbor sample and model.
struct LoadedRun {
  RunMeta meta;
  ParameterStore params;
  NeighborSample sample;
  std::unique_ptr<Model> model;
};

LoadedRun LoadRun(const fs::path& checkpoint) {
  RequireFile(checkpoint, "checkpoint");
  LoadedRun run;
  run.params = LoadCheckpoint(checkpoint);
  run.meta = ReadMeta(MetaPath(checkpoint));
  const auto& mc = run.meta.model;
  if (mc.kind == ModelKind::kKgcn) {
    if (run.params.dims.depth != mc.depth || run.params.dims.dim != mc.dim ||
        run.params.dims.aggregator != mc.aggregator) {
      throw DataError("checkpoint does not match its run metadata");
    }
    const auto kg = LoadKg(run.meta.kg);
    const Adjacency adjacency(kg.triples, run.params.dims.num_entities);
    run.sample = NeighborSample(adjacency, mc.neighbor_sample,
                                static_cast<RelationId>(run.meta.num_kg_relations),
                                run.meta.seed);
  }
  run.model = std::make_unique<Model>(
      mc, mc.kind == ModelKind::kKgcn ? &run.sample : nullptr);
  return run;
}

void ValidateTrainOptions(const TrainOptions& o) {
  o.model.Validate();
  o.train.Validate();
  if (o.repeat < 1) throw ConfigError("repeat must be >= 1");
  RequireFile(o.ratings, "ratings file");
  RequireFile(o.kg, "KG file");
}

struct LoadedData {
  SplitDataset split;
  KnowledgeGraph kg;
  Adjacency adjacency;
};

LoadedData LoadAndSplit(const TrainOptions& o) {
  LoadedData data;
  auto dataset = MakeDataset(LoadInteractions(o.ratings));
  if (dataset.records.empty()) throw DataError("no interactions in " + o.ratings.string());
  data.kg = LoadKg(o.kg);
  const std::size_t entities = std::max(data.kg.num_entities, dataset.num_items);
  data.adjacency = Adjacency(data.kg.triples, entities);
  data.split = Split(dataset, o.ratios, o.split_seed.value_or(o.train.seed));
  spdlog::info("data: {} users, {} items, {} entities, {} relations; split {}/{}/{}",
               dataset.num_users, dataset.num_items, entities, data.kg.num_relations,
               data.split.train.size(), data.split.validation.size(), data.split.test.size());
  return data;
}

std::pair<double, double> MeanStd(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const CLI::Error*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const IoError*>(&e)) return kExitData;
  return kExitData;
}

std::array<double, 3> ParseRatios(const std::string& text) {
  std::array<double, 3> r{};
  const auto parts = internal::SplitFields(text, ":");
  if (parts.size() != 3) throw ConfigError("ratios must look like 6:2:2");
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      r[i] = std::stod(std::string(parts[i]), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad ratio '" + std::string(parts[i]) + "'");
    }
  }
  return r;
}

DatasetStats Preprocess(const PreprocessOptions& o, std::ostream& out) {
  RequireFile(o.ratings, "ratings file");
  RequireFile(o.item2entity, "item2entity file");
  RequireFile(o.kg, "KG file");

  const auto items = LoadItemEntityMap(o.item2entity);
  const auto ratings = LoadRatings(o.ratings, o.format);
  const auto positives = Implicitize(ratings, o.threshold);
  const auto remapped = RemapPositives(positives, items);
  std::size_t n_pos = 0;
  for (const auto& p : remapped.positives) n_pos += p.size();
  if (n_pos == 0) throw DataError("no interactions");
  if (remapped.dropped_records > 0) {
    spdlog::info("dropped {} positive records whose item has no matched entity",
                 remapped.dropped_records);
  }
  const auto negatives = SampleUnwatchedNegatives(remapped.positives, items.num_items(), o.seed);
  const auto dataset = JoinInteractions(remapped.positives, negatives, items.num_items());
  const auto kg = ConvertRawKg(o.kg, items);

  EnsureDir(o.out_dir);
  WriteInteractions(o.out_dir / "ratings_final.txt", dataset.records);
  WriteKg(o.out_dir / "kg_final.txt", kg.graph.triples);
  WriteIndexTable(o.out_dir / "user_index.txt", remapped.raw_users);
  WriteIndexTable(o.out_dir / "item_index.txt", items.raw_items);
  WriteIndexTable(o.out_dir / "entity_index.txt", kg.entity_tokens);
  WriteIndexTable(o.out_dir / "relation_index.txt", kg.relation_tokens);

  DatasetStats s;
  s.users = remapped.positives.size();
  s.items = items.num_items();
  s.interactions = n_pos;
  s.entities = kg.graph.num_entities;
  s.relations = kg.graph.num_relations;
  s.triples = kg.graph.triples.size();
  s.dropped_unmapped = remapped.dropped_records;

  out << "statistic,value\n"
      << "users," << s.users << '\n'
      << "items," << s.items << '\n'
      << "interactions," << s.interactions << '\n'
      << "entities," << s.entities << '\n'
      << "relations," << s.relations << '\n'
      << "kg_triples," << s.triples << '\n';
  return s;
}

TrainSummary Train(const TrainOptions& o, std::ostream& out) {
  ValidateTrainOptions(o);
  const auto data = LoadAndSplit(o);
  EnsureDir(o.out_dir);
  const fs::path train_path = fs::absolute(o.out_dir / "train.txt");
  const fs::path val_path = fs::absolute(o.out_dir / "validation.txt");
  const fs::path test_path = fs::absolute(o.out_dir / "test.txt");
  WriteInteractions(train_path, data.split.train);
  WriteInteractions(val_path, data.split.validation);
  WriteInteractions(test_path, data.split.test);

  TrainSummary summary;
  std::vector<double> aucs, f1s;
  for (std::size_t r = 0; r < o.repeat; ++r) {
    TrainConfig tc = o.train;
    tc.seed = o.train.seed + r;
    spdlog::info("run {}/{} (seed {})", r + 1, o.repeat, tc.seed);
    const auto result =
        RunExperiment(data.split, data.adjacency, data.kg.num_relations, o.model, tc);
    const fs::path run_dir = o.out_dir / ("run_" + std::to_string(r));
    EnsureDir(run_dir);
    SaveCheckpoint(run_dir / "checkpoint.bin", result.train.params);
    RunMeta meta{o.model,    tc.seed,  data.kg.num_relations, data.split.num_items,
                 fs::absolute(o.kg), train_path, val_path, test_path};
    WriteMeta(MetaPath(run_dir / "checkpoint.bin"), meta);
    result.train.report.WriteCsv(run_dir / "train_report.csv");
    spdlog::info("run {}: best epoch {}, test auc {:.4f} f1 {:.4f}", r,
                 result.train.report.best_epoch, result.test.auc, result.test.f1);
    summary.runs.push_back(result.test);
    aucs.push_back(result.test.auc);
    f1s.push_back(result.test.f1);
  }
  std::tie(summary.mean_auc, summary.std_auc) = MeanStd(aucs);
  std::tie(summary.mean_f1, summary.std_f1) = MeanStd(f1s);

  std::ofstream csv(o.out_dir / "summary.csv", std::ios::trunc);
  if (!csv) throw IoError("cannot write summary.csv");
  for (std::ostream* s : {static_cast<std::ostream*>(&csv), &out}) {
    *s << "run,seed,test_auc,test_f1\n";
    for (std::size_t r = 0; r < summary.runs.size(); ++r) {
      *s << r << ',' << o.train.seed + r << ',' << internal::FormatDouble(summary.runs[r].auc)
         << ',' << internal::FormatDouble(summary.runs[r].f1) << '\n';
    }
    *s << "mean,," << internal::FormatDouble(summary.mean_auc) << ','
       << internal::FormatDouble(summary.mean_f1) << '\n'
       << "std,," << internal::FormatDouble(summary.std_auc) << ','
       << internal::FormatDouble(summary.std_f1) << '\n';
  }
  spdlog::info("test AUC {:.4f} ± {:.4f}, F1 {:.4f} ± {:.4f} over {} run(s)", summary.mean_auc,
               summary.std_auc, summary.mean_f1, summary.std_f1, summary.runs.size());
  return summary;
}

void Evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.mode != "ctr" && o.mode != "topk") {
    throw ConfigError("unknown evaluation mode '" + o.mode + "' (expected ctr or topk)");
  }
  const auto run = LoadRun(o.checkpoint);
  const fs::path data_path = o.data.value_or(run.meta.test);
  const auto records = LoadInteractions(data_path);
  const auto scorer = MakeScorer(*run.model, run.params);
  if (o.mode == "ctr") {
    const auto report = CtrEval(scorer, records, o.threads);
    out << "metric,value\n"
        << "auc," << internal::FormatDouble(report.auc) << '\n'
        << "f1," << internal::FormatDouble(report.f1) << '\n';
    spdlog::info("CTR on {} records: AUC {:.4f}, F1 {:.4f}", report.records, report.auc,
                 report.f1);
    return;
  }
  const auto train = LoadInteractions(run.meta.train);
  const auto report = TopKEval(scorer, train, records, run.meta.num_items, o.k_list, o.threads);
  out << "k,recall\n";
  for (std::size_t i = 0; i < report.k_list.size(); ++i) {
    out << report.k_list[i] << ',' << internal::FormatDouble(report.mean_recall[i]) << '\n';
  }
  spdlog::info("top-K over {} users", report.users);
}

std::vector<SweepRow> Sweep(const SweepOptions& o, std::ostream& out) {
  if (o.values.empty()) throw ConfigError("sweep needs at least one value");
  ValidateTrainOptions(o.base);
  for (std::size_t v : o.values) {
    ModelConfig mc = o.base.model;
    switch (o.parameter) {
      case SweepParameter::kNeighborSample:
        mc.neighbor_sample = v;
        break;
      case SweepParameter::kDepth:
        mc.depth = v;
        break;
      case SweepParameter::kDim:
        mc.dim = v;
        break;
    }
    mc.Validate();
  }
  const auto data = LoadAndSplit(o.base);
  const auto rows = kgcn::Sweep(data.split, data.adjacency, data.kg.num_relations, o.parameter,
                                o.values, o.base.model, o.base.train, o.base.repeat);
  WriteSweepCsv(out, rows);
  if (o.csv) {
    std::ofstream f(*o.csv, std::ios::trunc);
    if (!f) throw IoError("cannot write " + o.csv->string());
    WriteSweepCsv(f, rows);
  }
  return rows;
}

void Predict(const PredictOptions& o, std::ostream& out) {
  const auto run = LoadRun(o.checkpoint);
  if (o.user >= run.params.dims.num_users) {
    throw DataError("unknown user index " + std::to_string(o.user) + " (model has " +
                    std::to_string(run.params.dims.num_users) + " users)");
  }
  std::vector<ItemId> items;
  if (o.items && !o.items->empty()) {
    items = *o.items;
    for (ItemId v : items) {
      if (v >= run.meta.num_items) {
        throw DataError("unknown item index " + std::to_string(v));
      }
    }
  } else {
    items.resize(run.meta.num_items);
    std::iota(items.begin(), items.end(), ItemId{0});
  }
  std::vector<UserId> users(items.size(), o.user);
  std::vector<double> scores(items.size());
  MakeScorer(*run.model, run.params)(users, items, scores);
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return items[a] < items[b];
  });
  out << "item,score\n";
  for (std::size_t i = 0; i < std::min(o.top, order.size()); ++i) {
    out << items[order[i]] << ',' << internal::FormatDouble(scores[order[i]]) << '\n';
  }
}

}  // namespace kgcn::cli
