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

#include "kgcn/params.h"

#include <cmath>

#include "kgcn/error.h"
#include "kgcn/random.h"

namespace kgcn {

std::string AggregatorName(Aggregator agg) {
  switch (agg) {
    case Aggregator::kSum:
      return "sum";
    case Aggregator::kConcat:
      return "concat";
    case Aggregator::kNeighbor:
      return "neighbor";
  }
  return "unknown";
}

Aggregator ParseAggregator(const std::string& name) {
  if (name == "sum") return Aggregator::kSum;
  if (name == "concat") return Aggregator::kConcat;
  if (name == "neighbor") return Aggregator::kNeighbor;
  throw ConfigError("unknown aggregator '" + name + "' (expected sum, concat or neighbor)");
}

ParameterStore::ParameterStore(const ModelDims& d)
    : dims(d),
      users(d.num_users, d.dim),
      entities(d.num_entities, d.dim),
      relations(d.num_relations, d.dim) {
  for (std::size_t h = 0; h < d.depth; ++h) {
    hop_weights.emplace_back(d.dim, d.hop_input_dim());
    hop_biases.emplace_back(d.dim, 0.0);
  }
}

std::vector<ParameterStore::Block> ParameterStore::Blocks() {
  std::vector<Block> blocks{{"user_embeddings", users.values()},
                            {"entity_embeddings", entities.values()},
                            {"relation_embeddings", relations.values()}};
  for (std::size_t h = 0; h < hop_weights.size(); ++h) {
    blocks.push_back({"hop" + std::to_string(h + 1) + "_weight", hop_weights[h].values()});
  }
  for (std::size_t h = 0; h < hop_biases.size(); ++h) {
    blocks.push_back({"hop" + std::to_string(h + 1) + "_bias", hop_biases[h]});
  }
  return blocks;
}

std::vector<ParameterStore::ConstBlock> ParameterStore::Blocks() const {
  std::vector<ConstBlock> out;
  for (auto& b : const_cast<ParameterStore*>(this)->Blocks()) {
    out.push_back({std::move(b.name), b.values});
  }
  return out;
}

std::size_t ParameterStore::NumParameters() const {
  std::size_t n = 0;
  for (const auto& b : Blocks()) n += b.values.size();
  return n;
}

double ParameterStore::SquaredNorm() const {
  double s = 0.0;
  for (const auto& b : Blocks()) {
    for (double v : b.values) s += v * v;
  }
  return s;
}

ParameterStore InitParams(const ModelDims& dims, std::uint64_t seed) {
  if (dims.dim == 0 || dims.num_users == 0 || dims.num_entities == 0 ||
      dims.num_relations == 0) {
    throw ConfigError("parameter dimensions must be >= 1");
  }
  ParameterStore p(dims);
  Rng rng = MakeRng(seed, SeedStream::kInit);
  auto glorot = [&](Matrix& m) {
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& v : m.values()) v = u(rng);
  };
  glorot(p.users);
  glorot(p.entities);
  glorot(p.relations);
  for (auto& w : p.hop_weights) glorot(w);
  return p;
}

GradientStore::GradientStore(const ModelDims& dims) : grad_(dims) {
  users_.marked.assign(dims.num_users, 0);
  entities_.marked.assign(dims.num_entities, 0);
  relations_.marked.assign(dims.num_relations, 0);
}

std::span<double> GradientStore::Touch(RowTracker* tracker, Matrix* table, std::size_t row) {
  if (!tracker->marked[row]) {
    tracker->marked[row] = 1;
    tracker->rows.push_back(static_cast<std::uint32_t>(row));
  }
  return table->row(row);
}

void GradientStore::Clear() {
  auto clear = [](RowTracker* tracker, Matrix* table) {
    for (auto r : tracker->rows) {
      auto row = table->row(r);
      std::fill(row.begin(), row.end(), 0.0);
      tracker->marked[r] = 0;
    }
    tracker->rows.clear();
  };
  clear(&users_, &grad_.users);
  clear(&entities_, &grad_.entities);
  clear(&relations_, &grad_.relations);
  for (auto& w : grad_.hop_weights) std::fill(w.values().begin(), w.values().end(), 0.0);
  for (auto& b : grad_.hop_biases) std::fill(b.begin(), b.end(), 0.0);
}

void GradientStore::Accumulate(const GradientStore& other) {
  auto add_rows = [](std::span<const std::uint32_t> rows, const Matrix& src,
                     auto&& dst_row) {
    for (auto r : rows) {
      auto dst = dst_row(r);
      const auto s = src.row(r);
      for (std::size_t i = 0; i < s.size(); ++i) dst[i] += s[i];
    }
  };
  add_rows(other.touched_users(), other.grad_.users, [&](auto r) { return UserRow(r); });
  add_rows(other.touched_entities(), other.grad_.entities,
           [&](auto r) { return EntityRow(r); });
  add_rows(other.touched_relations(), other.grad_.relations,
           [&](auto r) { return RelationRow(r); });
  for (std::size_t h = 0; h < grad_.hop_weights.size(); ++h) {
    auto dst = grad_.hop_weights[h].values();
    const auto src = other.grad_.hop_weights[h].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    auto& db = grad_.hop_biases[h];
    const auto& sb = other.grad_.hop_biases[h];
    for (std::size_t i = 0; i < db.size(); ++i) db[i] += sb[i];
  }
}

}  // namespace kgcn
