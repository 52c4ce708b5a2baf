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

#ifndef KGCN_PARAMS_H_
#define KGCN_PARAMS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgcn/numerics.h"

namespace kgcn {

enum class Aggregator : std::uint32_t { kSum = 0, kConcat = 1, kNeighbor = 2 };

std::string AggregatorName(Aggregator agg);
Aggregator ParseAggregator(const std::string& name);

struct ModelDims {
  std::size_t num_users = 0;
  std::size_t num_entities = 0;
  // Rows of the relation table: KG relations plus the reserved self-relation.
  std::size_t num_relations = 0;
  std::size_t dim = 0;
  std::size_t depth = 0;
  Aggregator aggregator = Aggregator::kSum;

  // Input width of the hop transforms: 2d for concat, d otherwise.
  std::size_t hop_input_dim() const {
    return aggregator == Aggregator::kConcat ? 2 * dim : dim;
  }

  bool operator==(const ModelDims&) const = default;
};

// Trainable parameters: user/entity/relation embedding tables and one
// (W_h, b_h) pair per aggregation hop. W_h is d x d (d x 2d for concat).
struct ParameterStore {
  ModelDims dims;
  Matrix users;
  Matrix entities;
  Matrix relations;
  std::vector<Matrix> hop_weights;
  std::vector<std::vector<double>> hop_biases;

  ParameterStore() = default;
  // Zero-filled store with the given shapes.
  explicit ParameterStore(const ModelDims& dims);

  template <typename T>
  struct BasicBlock {
    std::string name;
    std::span<T> values;
  };
  using Block = BasicBlock<double>;
  using ConstBlock = BasicBlock<const double>;

  // Fixed order: users, entities, relations, W_1..W_H, b_1..b_H.
  std::vector<Block> Blocks();
  std::vector<ConstBlock> Blocks() const;

  std::size_t NumParameters() const;
  double SquaredNorm() const;

  bool operator==(const ParameterStore&) const = default;
};

// Glorot-uniform tables and weights (bound sqrt(6 / (rows + cols))), zero
// biases. Deterministic in `seed`.
ParameterStore InitParams(const ModelDims& dims, std::uint64_t seed);

// Batch gradient with the same shapes as ParameterStore. Embedding rows are
// accumulated sparsely: rows never requested stay exactly zero and Clear()
// only touches what was written.
class GradientStore {
 public:
  GradientStore() = default;
  explicit GradientStore(const ModelDims& dims);

  std::span<double> UserRow(std::size_t u) { return Touch(&users_, &grad_.users, u); }
  std::span<double> EntityRow(std::size_t e) { return Touch(&entities_, &grad_.entities, e); }
  std::span<double> RelationRow(std::size_t r) {
    return Touch(&relations_, &grad_.relations, r);
  }
  Matrix& hop_weight(std::size_t h) { return grad_.hop_weights[h]; }
  std::vector<double>& hop_bias(std::size_t h) { return grad_.hop_biases[h]; }

  const ParameterStore& values() const { return grad_; }

  std::span<const std::uint32_t> touched_users() const { return users_.rows; }
  std::span<const std::uint32_t> touched_entities() const { return entities_.rows; }
  std::span<const std::uint32_t> touched_relations() const { return relations_.rows; }

  void Clear();
  // this += other, visiting other's touched rows in insertion order.
  void Accumulate(const GradientStore& other);

 private:
  struct RowTracker {
    std::vector<std::uint32_t> rows;
    std::vector<char> marked;
  };
  static std::span<double> Touch(RowTracker* tracker, Matrix* table, std::size_t row);

  ParameterStore grad_;
  RowTracker users_;
  RowTracker entities_;
  RowTracker relations_;
};

}  // namespace kgcn

#endif  // KGCN_PARAMS_H_
