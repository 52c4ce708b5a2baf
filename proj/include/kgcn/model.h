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

#ifndef KGCN_MODEL_H_
#define KGCN_MODEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kgcn/kg_store.h"
#include "kgcn/numerics.h"
#include "kgcn/params.h"

namespace kgcn {

enum class ModelKind { kKgcn, kMf };

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

struct ModelConfig {
  ModelKind kind = ModelKind::kKgcn;
  std::size_t dim = 16;             // d
  std::size_t depth = 1;            // H
  std::size_t neighbor_sample = 8;  // K
  Aggregator aggregator = Aggregator::kSum;
  // KGCN-avg: neighbors are averaged instead of weighted by user-relation
  // scores.
  bool uniform_weights = false;

  // Throws ConfigError unless d >= 1, K >= 1 and (for KGCN) H >= 1.
  void Validate() const;

  // Parameter shapes for a dataset. MF keeps no hop transforms.
  ModelDims Dims(std::size_t num_users, std::size_t num_entities,
                 std::size_t num_kg_relations) const;
};

// pi = <u, r>.
double UserRelationScore(std::span<const double> user, std::span<const double> relation);

// Softmax over the K user-relation scores, then the weighted sum of the K
// neighbor representations (each d wide, stored back to back). With
// `uniform_weights` the mix is the plain mean.
void NeighborhoodMix(std::span<const double> neighbor_reps,
                     std::span<const double> relation_vecs, std::span<const double> user,
                     bool uniform_weights, std::span<double> out);

// sum:      act(W (self + mixed) + b)
// concat:   act(W [self; mixed] + b)
// neighbor: act(W mixed + b)
void Aggregate(std::span<const double> self_rep, std::span<const double> mixed,
               const Matrix& weight, std::span<const double> bias, Activation act,
               Aggregator variant, std::span<double> out);

// Everything the backward pass needs from one forward evaluation.
//
// Nodes of the receptive field are numbered layer by layer; layer h starts at
// layer_offset[h]. reps[i] holds the i-order representation of every node in
// layers 0..H-i (reps[0] covers the whole field), d values per node.
struct LayerState {
  UserId user = 0;
  std::size_t dim = 0;
  std::size_t sample_size = 0;
  std::size_t depth = 0;
  std::vector<std::size_t> layer_offset;
  std::vector<double> mix_weights;  // K per node in layers 0..H-1
  std::vector<std::vector<double>> reps;
  std::vector<std::vector<double>> mixed;           // per hop, layers 0..H-i
  std::vector<std::vector<double>> pre_activation;  // per hop, layers 0..H-i
  double logit = 0.0;
  double probability = 0.5;

  std::span<const double> item_vector() const { return {reps[depth].data(), dim}; }
};

// y_hat = sigmoid(<u, v^u>) after H rounds of biased neighborhood aggregation
// over `field`. Hops h < H use ReLU and hop H uses tanh. The returned
// probability is clamped to [1e-12, 1 - 1e-12]. Throws NumericError naming the
// hop when a representation becomes non-finite.
double KgcnForward(UserId user, const ReceptiveField& field, const ParameterStore& params,
                   const ModelConfig& config, LayerState* state);

// Accumulates dL/dTheta into `grads` given upstream = dL/dy_hat.
void KgcnBackward(const LayerState& state, const ReceptiveField& field,
                  const ParameterStore& params, const ModelConfig& config, double upstream,
                  GradientStore* grads);
// Same, starting from dL/dlogit (numerically preferable for cross-entropy).
void KgcnBackwardFromLogit(const LayerState& state, const ReceptiveField& field,
                           const ParameterStore& params, const ModelConfig& config,
                           double dlogit, GradientStore* grads);

// sigmoid(<user row, entity row>); no KG involvement.
double MfLogit(UserId user, ItemId item, const ParameterStore& params);
double MfForward(UserId user, ItemId item, const ParameterStore& params);
void MfBackwardFromLogit(UserId user, ItemId item, const ParameterStore& params,
                         double dlogit, GradientStore* grads);

// Binds a configuration to its neighbor sample so trainer and evaluator can
// score (user, item) pairs without caring about the model kind.
class Model {
 public:
  struct Workspace {
    ReceptiveField field;
    LayerState state;
    UserId user = 0;
    ItemId item = 0;
  };

  // `sample` may be null for MF and must outlive the model otherwise.
  Model(ModelConfig config, const NeighborSample* sample);

  const ModelConfig& config() const { return config_; }
  const NeighborSample* sample() const { return sample_; }

  // Probability in [1e-12, 1 - 1e-12]; leaves what Backward needs in `ws`.
  double Forward(const ParameterStore& params, UserId user, ItemId item,
                 Workspace* ws) const;
  double Logit(const Workspace& ws) const { return ws.state.logit; }
  void BackwardFromLogit(const ParameterStore& params, const Workspace& ws, double dlogit,
                         GradientStore* grads) const;

 private:
  ModelConfig config_;
  const NeighborSample* sample_;
};

}  // namespace kgcn

#endif  // KGCN_MODEL_H_
