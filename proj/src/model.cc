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

#include "kgcn/model.h"

#include <algorithm>
#include <cmath>

#include "kgcn/error.h"

namespace kgcn {

namespace {

Activation HopActivation(std::size_t hop, std::size_t depth) {
  return hop == depth ? Activation::kTanh : Activation::kRelu;
}

// Writes the aggregator input (self + mixed, [self; mixed] or mixed).
void AggregatorInput(std::span<const double> self_rep, std::span<const double> mixed,
                     Aggregator variant, std::span<double> input) {
  const std::size_t d = mixed.size();
  switch (variant) {
    case Aggregator::kSum:
      for (std::size_t c = 0; c < d; ++c) input[c] = self_rep[c] + mixed[c];
      break;
    case Aggregator::kConcat:
      std::copy(self_rep.begin(), self_rep.end(), input.begin());
      std::copy(mixed.begin(), mixed.end(), input.begin() + static_cast<std::ptrdiff_t>(d));
      break;
    case Aggregator::kNeighbor:
      std::copy(mixed.begin(), mixed.end(), input.begin());
      break;
  }
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string ModelKindName(ModelKind kind) {
  return kind == ModelKind::kMf ? "mf" : "kgcn";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "kgcn") return ModelKind::kKgcn;
  if (name == "mf") return ModelKind::kMf;
  throw ConfigError("unknown model '" + name + "' (expected kgcn or mf)");
}

void ModelConfig::Validate() const {
  if (dim < 1) throw ConfigError("embedding dimension d must be >= 1");
  if (neighbor_sample < 1) throw ConfigError("neighbor sample size K must be >= 1");
  if (kind == ModelKind::kKgcn && depth < 1) {
    throw ConfigError("receptive-field depth H must be >= 1");
  }
}

ModelDims ModelConfig::Dims(std::size_t num_users, std::size_t num_entities,
                            std::size_t num_kg_relations) const {
  ModelDims d;
  d.num_users = num_users;
  d.num_entities = num_entities;
  d.num_relations = num_kg_relations + 1;
  d.dim = dim;
  d.depth = kind == ModelKind::kKgcn ? depth : 0;
  d.aggregator = aggregator;
  return d;
}

double UserRelationScore(std::span<const double> user, std::span<const double> relation) {
  return InnerProduct(user, relation);
}

void NeighborhoodMix(std::span<const double> neighbor_reps,
                     std::span<const double> relation_vecs, std::span<const double> user,
                     bool uniform_weights, std::span<double> out) {
  const std::size_t d = out.size();
  if (d == 0 || neighbor_reps.size() % d != 0 || relation_vecs.size() != neighbor_reps.size() ||
      user.size() != d) {
    throw ConfigError("neighborhood mix: misaligned neighbor, relation or user vectors");
  }
  const std::size_t k = neighbor_reps.size() / d;
  std::vector<double> weights(k, 1.0 / static_cast<double>(k));
  if (!uniform_weights) {
    for (std::size_t i = 0; i < k; ++i) {
      weights[i] = UserRelationScore(user, relation_vecs.subspan(i * d, d));
    }
    Softmax(weights, weights);
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < d; ++c) out[c] += weights[i] * neighbor_reps[i * d + c];
  }
}

void Aggregate(std::span<const double> self_rep, std::span<const double> mixed,
               const Matrix& weight, std::span<const double> bias, Activation act,
               Aggregator variant, std::span<double> out) {
  if (self_rep.size() != mixed.size()) {
    throw ConfigError("aggregate: self and neighborhood vectors differ in length");
  }
  const std::size_t width = variant == Aggregator::kConcat ? 2 * mixed.size() : mixed.size();
  std::vector<double> input(width);
  AggregatorInput(self_rep, mixed, variant, input);
  Affine(weight, input, bias, out);
  Activate(out, act);
}

double KgcnForward(UserId user, const ReceptiveField& field, const ParameterStore& params,
                   const ModelConfig& config, LayerState* state) {
  const std::size_t d = config.dim;
  const std::size_t k = config.neighbor_sample;
  const std::size_t depth = config.depth;
  if (field.depth() != depth || field.sample_size != k) {
    throw ConfigError("receptive field shape does not match the model configuration");
  }
  if (params.dims.dim != d || params.dims.depth != depth ||
      params.dims.aggregator != config.aggregator) {
    throw ConfigError("parameter shapes do not match the model configuration");
  }
  if (user >= params.dims.num_users) {
    throw DataError("user index " + std::to_string(user) + " out of range");
  }

  LayerState& s = *state;
  s.user = user;
  s.dim = d;
  s.sample_size = k;
  s.depth = depth;
  s.layer_offset.assign(depth + 2, 0);
  for (std::size_t h = 0; h <= depth; ++h) {
    s.layer_offset[h + 1] = s.layer_offset[h] + field.entities[h].size();
  }
  const auto& off = s.layer_offset;
  const auto u = params.users.row(user);

  // Mixing weights depend only on (user, relation), so they are shared by all
  // hops.
  s.mix_weights.resize(off[depth] * k);
  for (std::size_t h = 0; h < depth; ++h) {
    const auto& rels = field.relations[h];
    for (std::size_t j = 0; j < field.entities[h].size(); ++j) {
      double* w = s.mix_weights.data() + (off[h] + j) * k;
      if (config.uniform_weights) {
        std::fill(w, w + k, 1.0 / static_cast<double>(k));
        continue;
      }
      for (std::size_t c = 0; c < k; ++c) {
        w[c] = UserRelationScore(u, params.relations.row(rels[j * k + c]));
      }
      Softmax(std::span<const double>(w, k), std::span<double>(w, k));
    }
  }

  s.reps.resize(depth + 1);
  s.mixed.resize(depth);
  s.pre_activation.resize(depth);
  s.reps[0].resize(off[depth + 1] * d);
  for (std::size_t h = 0; h <= depth; ++h) {
    for (std::size_t j = 0; j < field.entities[h].size(); ++j) {
      const auto e = field.entities[h][j];
      if (e >= params.dims.num_entities) {
        throw DataError("entity index " + std::to_string(e) + " out of range");
      }
      const auto row = params.entities.row(e);
      std::copy(row.begin(), row.end(), s.reps[0].begin() + static_cast<std::ptrdiff_t>((off[h] + j) * d));
    }
  }

  const std::size_t width = params.dims.hop_input_dim();
  std::vector<double> input(width);
  for (std::size_t i = 1; i <= depth; ++i) {
    const std::size_t nodes = off[depth - i + 1];
    const auto& prev = s.reps[i - 1];
    auto& mixed = s.mixed[i - 1];
    auto& z = s.pre_activation[i - 1];
    auto& out = s.reps[i];
    mixed.assign(nodes * d, 0.0);
    z.resize(nodes * d);
    out.resize(nodes * d);
    const Matrix& w = params.hop_weights[i - 1];
    const auto& b = params.hop_biases[i - 1];
    const Activation act = HopActivation(i, depth);
    for (std::size_t h = 0; h + i <= depth; ++h) {
      for (std::size_t j = 0; j < field.entities[h].size(); ++j) {
        const std::size_t node = off[h] + j;
        const double* weights = s.mix_weights.data() + node * k;
        double* m = mixed.data() + node * d;
        for (std::size_t c = 0; c < k; ++c) {
          const double* child = prev.data() + (off[h + 1] + j * k + c) * d;
          for (std::size_t x = 0; x < d; ++x) m[x] += weights[c] * child[x];
        }
        AggregatorInput({prev.data() + node * d, d}, {m, d}, config.aggregator, input);
        std::span<double> zn(z.data() + node * d, d);
        Affine(w, input, b, zn);
        std::span<double> yn(out.data() + node * d, d);
        std::copy(zn.begin(), zn.end(), yn.begin());
        Activate(yn, act);
      }
    }
    if (!AllFinite(z) || !AllFinite(out)) {
      throw NumericError("non-finite entity representation at hop " + std::to_string(i));
    }
  }

  s.logit = InnerProduct(u, s.item_vector());
  if (!std::isfinite(s.logit)) throw NumericError("non-finite prediction logit");
  s.probability = ClampedSigmoid(s.logit);
  return s.probability;
}

void KgcnBackward(const LayerState& state, const ReceptiveField& field,
                  const ParameterStore& params, const ModelConfig& config, double upstream,
                  GradientStore* grads) {
  const double sig = Sigmoid(state.logit);
  KgcnBackwardFromLogit(state, field, params, config, upstream * sig * (1.0 - sig), grads);
}

void KgcnBackwardFromLogit(const LayerState& state, const ReceptiveField& field,
                           const ParameterStore& params, const ModelConfig& config,
                           double dlogit, GradientStore* grads) {
  const std::size_t d = state.dim;
  const std::size_t k = state.sample_size;
  const std::size_t depth = state.depth;
  const auto& off = state.layer_offset;
  const auto u = params.users.row(state.user);
  const std::size_t width = params.dims.hop_input_dim();

  std::vector<double> du(d, 0.0);
  const auto v = state.item_vector();
  for (std::size_t c = 0; c < d; ++c) du[c] += dlogit * v[c];

  // g[i] is dL/d reps[i].
  std::vector<std::vector<double>> g(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i) g[i].assign(state.reps[i].size(), 0.0);
  for (std::size_t c = 0; c < d; ++c) g[depth][c] = dlogit * u[c];

  std::vector<double> input(width), dz(d), dinput(width), dw(k);
  for (std::size_t i = depth; i >= 1; --i) {
    const Matrix& w = params.hop_weights[i - 1];
    const Activation act = HopActivation(i, depth);
    Matrix& gw = grads->hop_weight(i - 1);
    auto& gb = grads->hop_bias(i - 1);
    const auto& prev = state.reps[i - 1];
    const auto& out = state.reps[i];
    const auto& z = state.pre_activation[i - 1];
    const auto& mixed = state.mixed[i - 1];
    auto& gprev = g[i - 1];
    for (std::size_t h = 0; h + i <= depth; ++h) {
      for (std::size_t j = 0; j < field.entities[h].size(); ++j) {
        const std::size_t node = off[h] + j;
        const double* gout = g[i].data() + node * d;
        bool any = false;
        for (std::size_t c = 0; c < d; ++c) {
          dz[c] = gout[c] * ActivationDerivative(act, z[node * d + c], out[node * d + c]);
          any = any || dz[c] != 0.0;
        }
        if (!any) continue;
        const std::span<const double> self_rep(prev.data() + node * d, d);
        const std::span<const double> m(mixed.data() + node * d, d);
        AggregatorInput(self_rep, m, config.aggregator, input);
        for (std::size_t c = 0; c < d; ++c) gb[c] += dz[c];
        OuterAccumulate(dz, input, &gw);
        std::fill(dinput.begin(), dinput.end(), 0.0);
        AffineTransposeAccumulate(w, dz, dinput);

        const double* dmixed = dinput.data();
        double* gself = gprev.data() + node * d;
        switch (config.aggregator) {
          case Aggregator::kSum:
            for (std::size_t c = 0; c < d; ++c) gself[c] += dinput[c];
            break;
          case Aggregator::kConcat:
            for (std::size_t c = 0; c < d; ++c) gself[c] += dinput[c];
            dmixed = dinput.data() + d;
            break;
          case Aggregator::kNeighbor:
            break;
        }

        const double* weights = state.mix_weights.data() + node * k;
        for (std::size_t c = 0; c < k; ++c) {
          const std::size_t child = off[h + 1] + j * k + c;
          const double* child_rep = prev.data() + child * d;
          double* gchild = gprev.data() + child * d;
          double dot = 0.0;
          for (std::size_t x = 0; x < d; ++x) {
            gchild[x] += weights[c] * dmixed[x];
            dot += dmixed[x] * child_rep[x];
          }
          dw[c] = dot;
        }
        if (config.uniform_weights) continue;
        // Softmax backward: dpi_c = w_c (dw_c - sum_j w_j dw_j).
        double avg = 0.0;
        for (std::size_t c = 0; c < k; ++c) avg += weights[c] * dw[c];
        const auto& rels = field.relations[h];
        for (std::size_t c = 0; c < k; ++c) {
          const double dpi = weights[c] * (dw[c] - avg);
          if (dpi == 0.0) continue;
          const auto rel = rels[j * k + c];
          const auto r = params.relations.row(rel);
          auto gr = grads->RelationRow(rel);
          for (std::size_t x = 0; x < d; ++x) {
            du[x] += dpi * r[x];
            gr[x] += dpi * u[x];
          }
        }
      }
    }
  }

  auto gu = grads->UserRow(state.user);
  for (std::size_t c = 0; c < d; ++c) gu[c] += du[c];
  for (std::size_t h = 0; h <= depth; ++h) {
    for (std::size_t j = 0; j < field.entities[h].size(); ++j) {
      const double* src = g[0].data() + (off[h] + j) * d;
      auto ge = grads->EntityRow(field.entities[h][j]);
      for (std::size_t c = 0; c < d; ++c) ge[c] += src[c];
    }
  }
}

double MfLogit(UserId user, ItemId item, const ParameterStore& params) {
  if (user >= params.dims.num_users || item >= params.dims.num_entities) {
    throw DataError("user or item index out of range");
  }
  return InnerProduct(params.users.row(user), params.entities.row(item));
}

double MfForward(UserId user, ItemId item, const ParameterStore& params) {
  return ClampedSigmoid(MfLogit(user, item, params));
}

void MfBackwardFromLogit(UserId user, ItemId item, const ParameterStore& params,
                         double dlogit, GradientStore* grads) {
  const auto u = params.users.row(user);
  const auto v = params.entities.row(item);
  auto gu = grads->UserRow(user);
  auto gv = grads->EntityRow(item);
  for (std::size_t c = 0; c < u.size(); ++c) {
    gu[c] += dlogit * v[c];
    gv[c] += dlogit * u[c];
  }
}

Model::Model(ModelConfig config, const NeighborSample* sample)
    : config_(config), sample_(sample) {
  config_.Validate();
  if (config_.kind == ModelKind::kKgcn) {
    if (sample_ == nullptr) throw ConfigError("KGCN model needs a neighbor sample");
    if (sample_->sample_size() != config_.neighbor_sample) {
      throw ConfigError("neighbor sample size differs from K in the model configuration");
    }
  }
}

double Model::Forward(const ParameterStore& params, UserId user, ItemId item,
                      Workspace* ws) const {
  ws->user = user;
  ws->item = item;
  if (config_.kind == ModelKind::kMf) {
    ws->state.user = user;
    ws->state.logit = MfLogit(user, item, params);
    ws->state.probability = ClampedSigmoid(ws->state.logit);
    return ws->state.probability;
  }
  BuildReceptiveField(*sample_, item, config_.depth, &ws->field);
  return KgcnForward(user, ws->field, params, config_, &ws->state);
}

void Model::BackwardFromLogit(const ParameterStore& params, const Workspace& ws,
                              double dlogit, GradientStore* grads) const {
  if (config_.kind == ModelKind::kMf) {
    MfBackwardFromLogit(ws.user, ws.item, params, dlogit, grads);
    return;
  }
  KgcnBackwardFromLogit(ws.state, ws.field, params, config_, dlogit, grads);
}

}  // namespace kgcn
