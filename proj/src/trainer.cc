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

#include "kgcn/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <spdlog/spdlog.h>

#include "kgcn/adam.h"
#include "kgcn/error.h"
#include "kgcn/parallel.h"
#include "kgcn/random.h"
#include "csv.h"

namespace kgcn {

namespace {

bool HasBothClasses(std::span<const Interaction> records) {
  bool pos = false, neg = false;
  for (const auto& r : records) {
    (r.label ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate eta must be > 0");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("L2 weight lambda must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (eval_every < 1) throw ConfigError("eval-every must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

double BatchLoss(std::span<const double> predictions, std::span<const std::uint8_t> labels,
                 const ParameterStore& params, double l2) {
  if (predictions.size() != labels.size()) {
    throw ConfigError("batch loss: predictions and labels differ in length");
  }
  double ce = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double p = predictions[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw NumericError("prediction " + std::to_string(p) + " outside (0, 1)");
    }
    ce -= labels[i] ? std::log(p) : std::log1p(-p);
  }
  if (!predictions.empty()) ce /= static_cast<double>(predictions.size());
  return ce + (l2 > 0.0 ? l2 * params.SquaredNorm() : 0.0);
}

void TrainReport::WriteCsv(std::ostream& out) const {
  out << "epoch,train_loss,val_auc,val_f1,seconds\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << internal::FormatDouble(e.train_loss) << ','
        << internal::FormatDouble(e.val_auc) << ',' << internal::FormatDouble(e.val_f1) << ','
        << internal::FormatDouble(e.seconds) << '\n';
  }
}

void TrainReport::WriteCsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  WriteCsv(out);
}

BatchScorer MakeScorer(const Model& model, const ParameterStore& params) {
  return [&model, &params](std::span<const UserId> users, std::span<const ItemId> items,
                           std::span<double> scores) {
    Model::Workspace ws;
    for (std::size_t i = 0; i < users.size(); ++i) {
      scores[i] = model.Forward(params, users[i], items[i], &ws);
    }
  };
}

TrainResult Train(const SplitDataset& split, const Model& model, const ModelDims& dims,
                  const TrainConfig& config) {
  config.Validate();
  if (split.num_users > dims.num_users || split.num_items > dims.num_entities) {
    throw ConfigError("dataset has more users or items than the parameter tables");
  }

  TrainResult result;
  ParameterStore params = InitParams(dims, config.seed);
  result.params = params;
  AdamState adam(dims);

  const bool can_validate = HasBothClasses(split.validation);
  if (!can_validate && config.max_epochs > 0) {
    spdlog::warn("validation set lacks one label class; keeping the final epoch");
  }

  const std::size_t workers = config.threads;
  std::vector<GradientStore> grads;
  grads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) grads.emplace_back(dims);
  std::vector<Model::Workspace> spaces(workers);

  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng = MakeRng(config.seed, SeedStream::kShuffle);
  std::vector<double> predictions;
  std::vector<std::uint8_t> labels;
  double best_auc = -std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const std::size_t n = end - begin;
      predictions.assign(n, 0.0);
      labels.assign(n, 0);
      const double scale = 1.0 / static_cast<double>(n);
      ParallelFor(n, workers, [&](std::size_t lo, std::size_t hi, std::size_t t) {
        auto& ws = spaces[t];
        for (std::size_t i = lo; i < hi; ++i) {
          const auto& rec = split.train[order[begin + i]];
          predictions[i] = model.Forward(params, rec.user, rec.item, &ws);
          labels[i] = rec.label;
          const double dlogit = (Sigmoid(model.Logit(ws)) - rec.label) * scale;
          model.BackwardFromLogit(params, ws, dlogit, &grads[t]);
        }
      });
      for (std::size_t t = 1; t < workers; ++t) {
        grads[0].Accumulate(grads[t]);
        grads[t].Clear();
      }
      const double loss = BatchLoss(predictions, labels, params, config.l2);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index));
      }
      loss_sum += loss * static_cast<double>(n);
      try {
        AdamStep(&params, grads[0].values(), &adam, config.learning_rate, config.l2);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_index));
      }
      grads[0].Clear();
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = order.empty() ? 0.0 : loss_sum / static_cast<double>(order.size());
    const bool evaluate = epoch % config.eval_every == 0 || epoch == config.max_epochs;
    if (can_validate && evaluate) {
      const auto val = CtrEval(MakeScorer(model, params), split.validation, config.threads);
      stats.val_auc = val.auc;
      stats.val_f1 = val.f1;
      if (val.auc > best_auc) {
        best_auc = val.auc;
        result.params = params;
        result.report.best_epoch = epoch;
        result.report.best_val_auc = val.auc;
      }
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spdlog::info("epoch {:>3}  loss {:.6f}  val_auc {:.4f}  val_f1 {:.4f}  ({:.1f}s)",
                 epoch, stats.train_loss, stats.val_auc, stats.val_f1, stats.seconds);
    result.report.epochs.push_back(stats);
  }
  if (!can_validate && config.max_epochs > 0) {
    result.params = params;
    result.report.best_epoch = config.max_epochs;
  }
  return result;
}

ExperimentResult RunExperiment(const SplitDataset& split, const Adjacency& adjacency,
                               std::size_t num_kg_relations, const ModelConfig& model_config,
                               const TrainConfig& train_config) {
  model_config.Validate();
  train_config.Validate();
  if (split.num_items > adjacency.num_entities()) {
    throw ConfigError("items exceed the entity index space of the knowledge graph");
  }
  ExperimentResult out;
  if (model_config.kind == ModelKind::kKgcn) {
    out.sample = NeighborSample(adjacency, model_config.neighbor_sample,
                                static_cast<RelationId>(num_kg_relations), train_config.seed);
  }
  const Model model(model_config,
                    model_config.kind == ModelKind::kKgcn ? &out.sample : nullptr);
  const ModelDims dims =
      model_config.Dims(split.num_users, adjacency.num_entities(), num_kg_relations);
  out.train = Train(split, model, dims, train_config);
  out.test = CtrEval(MakeScorer(model, out.train.params), split.test, train_config.threads);
  return out;
}

SweepParameter ParseSweepParameter(const std::string& name) {
  if (name == "K") return SweepParameter::kNeighborSample;
  if (name == "H") return SweepParameter::kDepth;
  if (name == "d") return SweepParameter::kDim;
  throw ConfigError("unknown sweep parameter '" + name + "' (expected K, H or d)");
}

std::string SweepParameterName(SweepParameter p) {
  switch (p) {
    case SweepParameter::kNeighborSample:
      return "K";
    case SweepParameter::kDepth:
      return "H";
    case SweepParameter::kDim:
      return "d";
  }
  return "?";
}

std::vector<SweepRow> Sweep(const SplitDataset& split, const Adjacency& adjacency,
                            std::size_t num_kg_relations, SweepParameter parameter,
                            const std::vector<std::size_t>& values,
                            const ModelConfig& model_config, const TrainConfig& train_config,
                            std::size_t repeats) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (repeats < 1) throw ConfigError("repeat must be >= 1");
  std::vector<SweepRow> rows;
  for (std::size_t value : values) {
    ModelConfig mc = model_config;
    switch (parameter) {
      case SweepParameter::kNeighborSample:
        mc.neighbor_sample = value;
        break;
      case SweepParameter::kDepth:
        mc.depth = value;
        break;
      case SweepParameter::kDim:
        mc.dim = value;
        break;
    }
    SweepRow row{SweepParameterName(parameter), value, 0.0, 0.0};
    for (std::size_t r = 0; r < repeats; ++r) {
      TrainConfig tc = train_config;
      tc.seed = train_config.seed + r;
      spdlog::info("sweep {}={} run {}/{}", row.parameter, value, r + 1, repeats);
      const auto result = RunExperiment(split, adjacency, num_kg_relations, mc, tc);
      row.test_auc += result.test.auc / static_cast<double>(repeats);
      row.test_f1 += result.test.f1 / static_cast<double>(repeats);
    }
    rows.push_back(row);
  }
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "parameter,value,test_auc,test_f1\n";
  for (const auto& r : rows) {
    out << r.parameter << ',' << r.value << ',' << internal::FormatDouble(r.test_auc) << ','
        << internal::FormatDouble(r.test_f1) << '\n';
  }
}

}  // namespace kgcn
