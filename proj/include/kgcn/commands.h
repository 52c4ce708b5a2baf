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

#ifndef KGCN_COMMANDS_H_
#define KGCN_COMMANDS_H_

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kgcn/data_ingest.h"
#include "kgcn/eval.h"
#include "kgcn/model.h"
#include "kgcn/trainer.h"

namespace kgcn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

// Maps library exceptions onto process exit codes.
int ExitCodeFor(const std::exception& e);

struct PreprocessOptions {
  std::filesystem::path ratings;
  std::filesystem::path item2entity;
  std::filesystem::path kg;
  std::filesystem::path out_dir;
  RatingFormat format;
  std::optional<double> threshold;
  std::uint64_t seed = 0;
};

struct DatasetStats {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t interactions = 0;  // positive records
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t triples = 0;
  std::size_t dropped_unmapped = 0;
};

// Writes ratings_final.txt, kg_final.txt and the index tables into out_dir and
// prints the dataset statistics as CSV.
DatasetStats Preprocess(const PreprocessOptions& options, std::ostream& out);

struct TrainOptions {
  std::filesystem::path ratings;  // final ratings file
  std::filesystem::path kg;       // final (integer) KG file
  std::filesystem::path out_dir;
  ModelConfig model;
  TrainConfig train;
  std::array<double, 3> ratios = {6.0, 2.0, 2.0};
  std::optional<std::uint64_t> split_seed;  // defaults to train.seed
  std::size_t repeat = 1;
};

struct TrainSummary {
  std::vector<CtrReport> runs;
  double mean_auc = 0.0;
  double std_auc = 0.0;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
};

// Runs `repeat` trainings (seed, seed + 1, ...) on one split. Per run it writes
// out_dir/run_<r>/{checkpoint.bin, checkpoint.bin.json, train_report.csv};
// the split goes to out_dir/{train,validation,test}.txt and the summary to
// out_dir/summary.csv and `out`.
TrainSummary Train(const TrainOptions& options, std::ostream& out);

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> data;  // defaults to the run's test split
  std::string mode = "ctr";                   // ctr | topk
  std::vector<std::size_t> k_list = kDefaultKList;
  std::size_t threads = 1;
};

void Evaluate(const EvaluateOptions& options, std::ostream& out);

struct SweepOptions {
  TrainOptions base;
  SweepParameter parameter = SweepParameter::kNeighborSample;
  std::vector<std::size_t> values;
  std::optional<std::filesystem::path> csv;
};

std::vector<SweepRow> Sweep(const SweepOptions& options, std::ostream& out);

struct PredictOptions {
  std::filesystem::path checkpoint;
  UserId user = 0;
  std::optional<std::vector<ItemId>> items;  // all items when empty
  std::size_t top = 10;
};

// "item,score" lines sorted by descending score.
void Predict(const PredictOptions& options, std::ostream& out);

// Parses "6:2:2" style ratios.
std::array<double, 3> ParseRatios(const std::string& text);

}  // namespace kgcn::cli

#endif  // KGCN_COMMANDS_H_
