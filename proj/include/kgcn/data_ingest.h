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

#ifndef KGCN_DATA_INGEST_H_
#define KGCN_DATA_INGEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kgcn {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

struct RawRating {
  std::string user;
  std::string item;
  double rating = 0.0;

  bool operator==(const RawRating&) const = default;
};

struct RatingFormat {
  // Field separator: "\t", ",", "::", ";" or any other literal string.
  std::string delimiter = "\t";
  bool skip_header = false;
};

// Parses "tab", "comma", "semicolon", "::" and friends into a literal
// delimiter string.
std::string ParseDelimiterName(const std::string& name);

// One RawRating per non-empty line, in file order. Fields beyond the third
// (e.g. timestamps) are ignored; surrounding double quotes are stripped.
std::vector<RawRating> LoadRatings(const std::filesystem::path& path,
                                   const RatingFormat& format);

struct RawPositive {
  std::string user;
  std::string item;

  bool operator==(const RawPositive&) const = default;
};

// Collapses duplicate (user, item) pairs to their maximum rating, then keeps
// pairs with rating >= threshold (all pairs when no threshold is given).
// Output order follows the first occurrence of each pair.
std::vector<RawPositive> Implicitize(const std::vector<RawRating>& ratings,
                                     std::optional<double> threshold);

// raw item id -> dense item index. Items take entity indices 0..N-1 in the
// order their entity token first appears in the mapping file, so items
// occupy a prefix of the entity index space.
struct ItemEntityMap {
  std::unordered_map<std::string, ItemId> item_index;
  std::unordered_map<std::string, std::uint32_t> entity_index;
  std::vector<std::string> raw_items;     // by item index
  std::vector<std::string> entity_tokens;  // by entity index, items only

  std::size_t num_items() const { return raw_items.size(); }
};

// Two tab-separated fields per line: raw_item_id, entity_id.
// Throws DataError when a raw item is listed twice or two items share an entity.
ItemEntityMap LoadItemEntityMap(const std::filesystem::path& path);

struct RemappedPositives {
  // positives[user] holds sorted, unique item indices.
  std::vector<std::vector<ItemId>> positives;
  std::vector<std::string> raw_users;  // by user index
  std::size_t num_items = 0;
  std::size_t dropped_records = 0;  // positives whose item had no entity
};

// Drops positives for unmapped items and assigns dense user indices in order
// of first appearance among the surviving records.
RemappedPositives RemapPositives(const std::vector<RawPositive>& positives,
                                 const ItemEntityMap& items);

struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  std::uint8_t label = 0;

  bool operator==(const Interaction&) const = default;
};

// For each user, draws min(#positives, #unwatched) distinct items uniformly
// from the items the user has no positive for. negatives[user] is returned in
// ascending item order.
std::vector<std::vector<ItemId>> SampleUnwatchedNegatives(
    const std::vector<std::vector<ItemId>>& positives, std::size_t num_items,
    std::uint64_t seed);

struct InteractionDataset {
  std::vector<Interaction> records;
  std::size_t num_users = 0;
  std::size_t num_items = 0;
};

// Per user: positives (label 1) then negatives (label 0), both ascending.
InteractionDataset JoinInteractions(
    const std::vector<std::vector<ItemId>>& positives,
    const std::vector<std::vector<ItemId>>& negatives, std::size_t num_items);

struct SplitDataset {
  std::vector<Interaction> train;
  std::vector<Interaction> validation;
  std::vector<Interaction> test;
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::uint64_t seed = 0;
};

// Uniform random partition by normalized ratios. Validation and test sizes are
// round(n * r / sum(r)); train takes the remainder.
SplitDataset Split(const InteractionDataset& dataset,
                   const std::array<double, 3>& ratios, std::uint64_t seed);

// "user<TAB>item<TAB>label" per line.
void WriteInteractions(const std::filesystem::path& path,
                       const std::vector<Interaction>& records);
std::vector<Interaction> LoadInteractions(const std::filesystem::path& path);

// Builds the dataset view (num_users / num_items = 1 + max index) of a list
// of records loaded from disk.
InteractionDataset MakeDataset(std::vector<Interaction> records);

}  // namespace kgcn

#endif  // KGCN_DATA_INGEST_H_
