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

#ifndef KGCN_KG_STORE_H_
#define KGCN_KG_STORE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kgcn/data_ingest.h"

namespace kgcn {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  bool operator==(const Triple&) const = default;
};

struct KnowledgeGraph {
  std::vector<Triple> triples;
  std::size_t num_entities = 0;   // 1 + max entity index
  std::size_t num_relations = 0;  // 1 + max relation index
};

// "head<TAB>relation<TAB>tail" with base-10 non-negative integers.
KnowledgeGraph LoadKg(const std::filesystem::path& path);
void WriteKg(const std::filesystem::path& path, const std::vector<Triple>& triples);

// Raw triples with opaque tokens (e.g. Satori ids and relation names).
// Item entities keep the indices assigned by `items`; other entity tokens are
// appended in order of first appearance, relations likewise.
struct ConvertedKg {
  KnowledgeGraph graph;
  std::vector<std::string> entity_tokens;
  std::vector<std::string> relation_tokens;
};
ConvertedKg ConvertRawKg(const std::filesystem::path& path,
                         const ItemEntityMap& items);

struct Neighbor {
  EntityId entity = 0;
  RelationId relation = 0;

  bool operator==(const Neighbor&) const = default;
};

// Undirected adjacency in CSR layout: every triple (h, r, t) contributes
// (t, r) to h's list and (h, r) to t's list. Duplicates are kept.
class Adjacency {
 public:
  Adjacency() = default;
  Adjacency(const std::vector<Triple>& triples, std::size_t num_entities);

  std::span<const Neighbor> neighbors(EntityId e) const {
    return {entries_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  std::size_t num_entities() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return entries_.size(); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> entries_;
};

// Fixed mapping entity -> exactly K (neighbor, relation) pairs.
// |N(v)| >= K: K draws without replacement; 1 <= |N(v)| < K: K draws with
// replacement; |N(v)| == 0: K copies of (v, self_relation).
class NeighborSample {
 public:
  NeighborSample() = default;
  NeighborSample(const Adjacency& adjacency, std::size_t sample_size,
                 RelationId self_relation, std::uint64_t seed);

  std::span<const EntityId> entities(EntityId e) const {
    return {entities_.data() + e * k_, k_};
  }
  std::span<const RelationId> relations(EntityId e) const {
    return {relations_.data() + e * k_, k_};
  }
  std::size_t sample_size() const { return k_; }
  std::size_t num_entities() const { return k_ == 0 ? 0 : entities_.size() / k_; }
  RelationId self_relation() const { return self_relation_; }
  std::uint64_t seed() const { return seed_; }

  bool operator==(const NeighborSample&) const = default;

 private:
  std::size_t k_ = 0;
  RelationId self_relation_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<EntityId> entities_;
  std::vector<RelationId> relations_;
};

// Fixed-shape expansion of one item: layer h holds K^h entity indices and
// entry j of layer h has its sampled neighbors at entries jK..jK+K-1 of layer
// h+1. relations[h] runs parallel to entities[h + 1] and names the edge from
// the parent, so relations has `depth` layers.
struct ReceptiveField {
  std::size_t sample_size = 0;
  std::vector<std::vector<EntityId>> entities;
  std::vector<std::vector<RelationId>> relations;

  std::size_t depth() const { return entities.empty() ? 0 : entities.size() - 1; }
};

ReceptiveField BuildReceptiveField(const NeighborSample& sample, EntityId item,
                                   std::size_t depth);
// Reuses the buffers of `field`.
void BuildReceptiveField(const NeighborSample& sample, EntityId item,
                         std::size_t depth, ReceptiveField* field);

}  // namespace kgcn

#endif  // KGCN_KG_STORE_H_
