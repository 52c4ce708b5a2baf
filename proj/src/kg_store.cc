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

#include "kgcn/kg_store.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "kgcn/error.h"
#include "kgcn/random.h"
#include "text_io.h"

namespace kgcn {

KnowledgeGraph LoadKg(const std::filesystem::path& path) {
  KnowledgeGraph kg;
  internal::ForEachLine(path, [&](std::string_view line, std::size_t number) {
    const auto trimmed = internal::Trim(line);
    if (trimmed.empty()) return;
    const auto fields = internal::SplitFields(trimmed, "\t");
    std::uint64_t h = 0, r = 0, t = 0;
    if (fields.size() != 3 || !internal::ParseIndex(internal::Trim(fields[0]), &h) ||
        !internal::ParseIndex(internal::Trim(fields[1]), &r) ||
        !internal::ParseIndex(internal::Trim(fields[2]), &t)) {
      throw ParseError(path.string(), number,
                       "expected head<TAB>relation<TAB>tail as non-negative "
                       "integers");
    }
    if (h >= UINT32_MAX || r >= UINT32_MAX || t >= UINT32_MAX) {
      throw ParseError(path.string(), number, "index too large");
    }
    kg.triples.push_back({static_cast<EntityId>(h), static_cast<RelationId>(r),
                          static_cast<EntityId>(t)});
    kg.num_entities = std::max<std::size_t>(kg.num_entities, std::max(h, t) + 1);
    kg.num_relations = std::max<std::size_t>(kg.num_relations, r + 1);
  });
  return kg;
}

void WriteKg(const std::filesystem::path& path, const std::vector<Triple>& triples) {
  auto out = internal::OpenForWrite(path);
  for (const auto& t : triples) {
    out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

ConvertedKg ConvertRawKg(const std::filesystem::path& path,
                         const ItemEntityMap& items) {
  ConvertedKg out;
  std::unordered_map<std::string, EntityId> entity_index(
      items.entity_index.begin(), items.entity_index.end());
  out.entity_tokens = items.entity_tokens;
  std::unordered_map<std::string, RelationId> relation_index;

  auto entity_of = [&](std::string_view token) {
    auto [it, inserted] = entity_index.try_emplace(
        std::string(token), static_cast<EntityId>(out.entity_tokens.size()));
    if (inserted) out.entity_tokens.emplace_back(token);
    return it->second;
  };
  auto relation_of = [&](std::string_view token) {
    auto [it, inserted] = relation_index.try_emplace(
        std::string(token), static_cast<RelationId>(out.relation_tokens.size()));
    if (inserted) out.relation_tokens.emplace_back(token);
    return it->second;
  };

  internal::ForEachLine(path, [&](std::string_view line, std::size_t number) {
    const auto trimmed = internal::Trim(line);
    if (trimmed.empty()) return;
    const auto fields = internal::SplitFields(trimmed, "\t");
    if (fields.size() != 3 || internal::Trim(fields[0]).empty() ||
        internal::Trim(fields[1]).empty() || internal::Trim(fields[2]).empty()) {
      throw ParseError(path.string(), number, "expected head<TAB>relation<TAB>tail");
    }
    const EntityId h = entity_of(internal::Trim(fields[0]));
    const RelationId r = relation_of(internal::Trim(fields[1]));
    const EntityId t = entity_of(internal::Trim(fields[2]));
    out.graph.triples.push_back({h, r, t});
  });
  out.graph.num_entities = out.entity_tokens.size();
  out.graph.num_relations = out.relation_tokens.size();
  return out;
}

Adjacency::Adjacency(const std::vector<Triple>& triples, std::size_t num_entities)
    : offsets_(num_entities + 1, 0) {
  for (const auto& t : triples) {
    if (t.head >= num_entities || t.tail >= num_entities) {
      throw DataError("triple references entity outside [0, " +
                      std::to_string(num_entities) + ")");
    }
    ++offsets_[t.head + 1];
    ++offsets_[t.tail + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  entries_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : triples) {
    entries_[cursor[t.head]++] = {t.tail, t.relation};
    entries_[cursor[t.tail]++] = {t.head, t.relation};
  }
}

NeighborSample::NeighborSample(const Adjacency& adjacency, std::size_t sample_size,
                               RelationId self_relation, std::uint64_t seed)
    : k_(sample_size), self_relation_(self_relation), seed_(seed) {
  if (sample_size == 0) throw ConfigError("neighbor sample size K must be >= 1");
  const std::size_t n = adjacency.num_entities();
  entities_.resize(n * k_);
  relations_.resize(n * k_);
  Rng rng = MakeRng(seed, SeedStream::kNeighbors);
  std::vector<std::size_t> slots;
  for (std::size_t e = 0; e < n; ++e) {
    const auto nbrs = adjacency.neighbors(static_cast<EntityId>(e));
    EntityId* ent = entities_.data() + e * k_;
    RelationId* rel = relations_.data() + e * k_;
    if (nbrs.empty()) {
      std::fill(ent, ent + k_, static_cast<EntityId>(e));
      std::fill(rel, rel + k_, self_relation);
    } else if (nbrs.size() >= k_) {
      slots.resize(nbrs.size());
      std::iota(slots.begin(), slots.end(), std::size_t{0});
      for (std::size_t i = 0; i < k_; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, slots.size() - 1);
        std::swap(slots[i], slots[pick(rng)]);
        ent[i] = nbrs[slots[i]].entity;
        rel[i] = nbrs[slots[i]].relation;
      }
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
      for (std::size_t i = 0; i < k_; ++i) {
        const auto& nb = nbrs[pick(rng)];
        ent[i] = nb.entity;
        rel[i] = nb.relation;
      }
    }
  }
}

void BuildReceptiveField(const NeighborSample& sample, EntityId item,
                         std::size_t depth, ReceptiveField* field) {
  if (item >= sample.num_entities()) {
    throw DataError("entity " + std::to_string(item) +
                    " has no neighbor sample (entity count " +
                    std::to_string(sample.num_entities()) + ")");
  }
  const std::size_t k = sample.sample_size();
  field->sample_size = k;
  field->entities.resize(depth + 1);
  field->relations.resize(depth);
  field->entities[0].assign(1, item);
  for (std::size_t h = 0; h < depth; ++h) {
    const auto& parents = field->entities[h];
    auto& children = field->entities[h + 1];
    auto& rels = field->relations[h];
    children.resize(parents.size() * k);
    rels.resize(parents.size() * k);
    for (std::size_t j = 0; j < parents.size(); ++j) {
      const auto ents = sample.entities(parents[j]);
      const auto rs = sample.relations(parents[j]);
      std::copy(ents.begin(), ents.end(), children.begin() + j * k);
      std::copy(rs.begin(), rs.end(), rels.begin() + j * k);
    }
  }
}

ReceptiveField BuildReceptiveField(const NeighborSample& sample, EntityId item,
                                   std::size_t depth) {
  ReceptiveField field;
  BuildReceptiveField(sample, item, depth, &field);
  return field;
}

}  // namespace kgcn
