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

#ifndef KGCN_TRAINER_H_
#define KGCN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kgcn/data_ingest.h"
#include "kgcn/eval.h"
#include "kgcn/kg_store.h"
#include "kgcn/model.h"
#include "kgcn/params.h"

namespace kgcn {

struct TrainConfig {
  double learning_rate = 5e-4;  // eta
  double l2 = 1e-4;             // lambda
  std::size_t batch_size = 128;
  std::size_t max_epochs = 20;
  std::size_t eval_every = 1;
  std::uint64_t seed = 0;
  // Per-batch forward/backward workers. Gradients are reduced in worker
  // order, so a fixed thread count is reproducible and 1 matches the
  // sequential sum bit for bit.
  std::size_t threads = 1;

  void Validate() const;
};

// Mean binary cross-entropy over the batch plus l2 * ||Theta||^2. Throws
// NumericError when a prediction lies outside (0, 1).
double BatchLoss(std::span<const double> predictions, std::span<const std::uint8_t> labels,
                 const ParameterStore& params, double l2);

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_auc = std::numeric_limits<double>::quiet_NaN();
  double val_f1 = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  // 0 means the initial parameters were kept.
  std::size_t best_epoch = 0;
  double best_val_auc = std::numeric_limits<double>::quiet_NaN();

  // epoch,train_loss,val_auc,val_f1,seconds
  void WriteCsv(std::ostream& out) const;
  void WriteCsv(const std::filesystem::path& path) const;
};

struct TrainResult {
  ParameterStore params;
  TrainReport report;
};

// Scores pairs with `model` under `params`; thread-safe.
BatchScorer MakeScorer(const Model& model, const ParameterStore& params);

// Fixed-epoch minibatch training with Adam. After every eval_every epochs (and
// the last one) the validation AUC is measured and the best parameters so far
// are kept. With no usable validation set the final parameters are returned.
TrainResult Train(const SplitDataset& split, const Model& model, const ModelDims& dims,
                  const TrainConfig& config);

// One end-to-end run: neighbor sampling (seeded by config.seed), training and
// test-set CTR evaluation.
struct ExperimentResult {
  TrainResult train;
  CtrReport test;
  NeighborSample sample;
};
ExperimentResult RunExperiment(const SplitDataset& split, const Adjacency& adjacency,
                               std::size_t num_kg_relations, const ModelConfig& model_config,
                               const TrainConfig& train_config);

enum class SweepParameter { kNeighborSample, kDepth, kDim };
SweepParameter ParseSweepParameter(const std::string& name);
std::string SweepParameterName(SweepParameter p);

struct SweepRow {
  std::string parameter;
  std::size_t value = 0;
  double test_auc = 0.0;
  double test_f1 = 0.0;
};

// Trains one model per value (each run seeded with train_config.seed + r for
// repeat r) and reports the mean test AUC / F1 per value.
std::vector<SweepRow> Sweep(const SplitDataset& split, const Adjacency& adjacency,
                            std::size_t num_kg_relations, SweepParameter parameter,
                            const std::vector<std::size_t>& values,
                            const ModelConfig& model_config, const TrainConfig& train_config,
                            std::size_t repeats = 1);

// parameter,value,test_auc,test_f1
void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace kgcn

#endif  // KGCN_TRAINER_H_
