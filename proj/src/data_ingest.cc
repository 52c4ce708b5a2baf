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

#include "kgcn/data_ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <spdlog/spdlog.h>
#include <utility>

#include "kgcn/error.h"
#include "kgcn/random.h"
#include "text_io.h"

namespace kgcn {

namespace {

std::string_view StripQuotes(std::string_view s) {
  s = internal::Trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

bool ParseReal(std::string_view s, double* out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

std::string PairKey(const std::string& user, const std::string& item) {
  std::string key;
  key.reserve(user.size() + item.size() + 1);
  key.append(user).push_back('\x1f');
  key.append(item);
  return key;
}

}  // namespace

std::string ParseDelimiterName(const std::string& name) {
  if (name == "tab" || name == "\\t" || name == "\t") return "\t";
  if (name == "comma" || name == ",") return ",";
  if (name == "semicolon" || name == ";") return ";";
  if (name == "space" || name == " ") return " ";
  if (name == "::" || name == "double-colon") return "::";
  if (name.empty()) throw ConfigError("empty delimiter");
  return name;
}

std::vector<RawRating> LoadRatings(const std::filesystem::path& path,
                                   const RatingFormat& format) {
  if (format.delimiter.empty()) throw ConfigError("empty delimiter");
  std::vector<RawRating> ratings;
  internal::ForEachLine(path, [&](std::string_view line, std::size_t number) {
    if (format.skip_header && number == 1) return;
    if (internal::Trim(line).empty()) return;
    const auto fields = internal::SplitFields(line, format.delimiter);
    if (fields.size() < 3) {
      throw ParseError(path.string(), number,
                       "expected at least 3 fields, got " +
                           std::to_string(fields.size()));
    }
    RawRating r;
    r.user = std::string(StripQuotes(fields[0]));
    r.item = std::string(StripQuotes(fields[1]));
    if (r.user.empty() || r.item.empty()) {
      throw ParseError(path.string(), number, "empty user or item key");
    }
    if (!ParseReal(StripQuotes(fields[2]), &r.rating)) {
      throw ParseError(path.string(), number,
                       "rating is not a finite number: '" +
                           std::string(fields[2]) + "'");
    }
    ratings.push_back(std::move(r));
  });
  return ratings;
}

std::vector<RawPositive> Implicitize(const std::vector<RawRating>& ratings,
                                     std::optional<double> threshold) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<const RawRating*> first;
  std::vector<double> best;
  for (const auto& r : ratings) {
    auto [it, inserted] = slot.try_emplace(PairKey(r.user, r.item), first.size());
    if (inserted) {
      first.push_back(&r);
      best.push_back(r.rating);
    } else {
      best[it->second] = std::max(best[it->second], r.rating);
    }
  }
  std::vector<RawPositive> positives;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (threshold && best[i] < *threshold) continue;
    positives.push_back({first[i]->user, first[i]->item});
  }
  return positives;
}

ItemEntityMap LoadItemEntityMap(const std::filesystem::path& path) {
  ItemEntityMap map;
  internal::ForEachLine(path, [&](std::string_view line, std::size_t number) {
    if (internal::Trim(line).empty()) return;
    const auto fields = internal::SplitFields(line, "\t");
    if (fields.size() < 2) {
      throw ParseError(path.string(), number,
                       "expected raw_item_id<TAB>entity_id");
    }
    std::string item(internal::Trim(fields[0]));
    std::string entity(internal::Trim(fields[1]));
    if (item.empty() || entity.empty()) {
      throw ParseError(path.string(), number, "empty item or entity id");
    }
    const auto index = static_cast<ItemId>(map.raw_items.size());
    if (!map.item_index.try_emplace(item, index).second) {
      throw DataError(path.string() + ":" + std::to_string(number) +
                      ": item '" + item + "' is mapped more than once");
    }
    if (!map.entity_index.try_emplace(entity, index).second) {
      throw DataError(path.string() + ":" + std::to_string(number) +
                      ": entity '" + entity +
                      "' is matched by more than one item");
    }
    map.raw_items.push_back(std::move(item));
    map.entity_tokens.push_back(std::move(entity));
  });
  return map;
}

RemappedPositives RemapPositives(const std::vector<RawPositive>& positives,
                                 const ItemEntityMap& items) {
  RemappedPositives out;
  out.num_items = items.num_items();
  std::unordered_map<std::string, UserId> user_index;
  for (const auto& p : positives) {
    const auto item = items.item_index.find(p.item);
    if (item == items.item_index.end()) {
      ++out.dropped_records;
      continue;
    }
    auto [it, inserted] =
        user_index.try_emplace(p.user, static_cast<UserId>(out.raw_users.size()));
    if (inserted) {
      out.raw_users.push_back(p.user);
      out.positives.emplace_back();
    }
    out.positives[it->second].push_back(item->second);
  }
  for (auto& list : out.positives) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return out;
}

std::vector<std::vector<ItemId>> SampleUnwatchedNegatives(
    const std::vector<std::vector<ItemId>>& positives, std::size_t num_items,
    std::uint64_t seed) {
  Rng rng = MakeRng(seed, SeedStream::kNegatives);
  std::vector<std::vector<ItemId>> negatives(positives.size());
  std::vector<char> watched(num_items, 0);
  std::vector<ItemId> unwatched;
  for (std::size_t u = 0; u < positives.size(); ++u) {
    for (ItemId v : positives[u]) {
      if (v >= num_items) {
        throw DataError("item index " + std::to_string(v) +
                        " out of range for " + std::to_string(num_items) +
                        " items");
      }
      watched[v] = 1;
    }
    unwatched.clear();
    for (std::size_t v = 0; v < num_items; ++v) {
      if (!watched[v]) unwatched.push_back(static_cast<ItemId>(v));
    }
    // Distinct positives only; callers may pass unsorted lists with repeats.
    std::size_t wanted = 0;
    for (ItemId v : positives[u]) {
      if (watched[v] == 1) {
        watched[v] = 2;
        ++wanted;
      }
    }
    const std::size_t take = std::min(wanted, unwatched.size());
    // Partial Fisher-Yates: the first `take` slots become a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, unwatched.size() - 1);
      std::swap(unwatched[i], unwatched[pick(rng)]);
    }
    auto& out = negatives[u];
    out.assign(unwatched.begin(), unwatched.begin() + take);
    std::sort(out.begin(), out.end());
    for (ItemId v : positives[u]) watched[v] = 0;
  }
  return negatives;
}

InteractionDataset JoinInteractions(
    const std::vector<std::vector<ItemId>>& positives,
    const std::vector<std::vector<ItemId>>& negatives, std::size_t num_items) {
  if (positives.size() != negatives.size()) {
    throw DataError("positive and negative user counts differ");
  }
  InteractionDataset ds;
  ds.num_users = positives.size();
  ds.num_items = num_items;
  for (std::size_t u = 0; u < positives.size(); ++u) {
    for (ItemId v : positives[u]) {
      ds.records.push_back({static_cast<UserId>(u), v, 1});
    }
    for (ItemId v : negatives[u]) {
      ds.records.push_back({static_cast<UserId>(u), v, 0});
    }
  }
  return ds;
}

SplitDataset Split(const InteractionDataset& dataset,
                   const std::array<double, 3>& ratios, std::uint64_t seed) {
  for (double r : ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigError("split ratios must be finite and non-negative");
    }
  }
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (!(total > 0.0)) throw ConfigError("split ratios sum to zero");
  if (dataset.records.empty()) throw DataError("cannot split an empty dataset");

  const std::size_t n = dataset.records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = MakeRng(seed, SeedStream::kSplit);
  std::shuffle(order.begin(), order.end(), rng);

  auto part_size = [&](double r) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * r / total));
  };
  std::size_t n_val = part_size(ratios[1]);
  std::size_t n_test = part_size(ratios[2]);
  if (n_val + n_test > n) n_test = n - n_val;
  const std::size_t n_train = n - n_val - n_test;

  SplitDataset split;
  split.num_users = dataset.num_users;
  split.num_items = dataset.num_items;
  split.seed = seed;
  split.train.reserve(n_train);
  split.validation.reserve(n_val);
  split.test.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = dataset.records[order[i]];
    if (i < n_val) {
      split.validation.push_back(rec);
    } else if (i < n_val + n_test) {
      split.test.push_back(rec);
    } else {
      split.train.push_back(rec);
    }
  }
  if (n >= 3) {
    const char* names[] = {"train", "validation", "test"};
    const std::size_t sizes[] = {n_train, n_val, n_test};
    for (int p = 0; p < 3; ++p) {
      if (ratios[p] > 0.0 && sizes[p] == 0) {
        spdlog::warn("split: {} part is empty although its ratio is {}",
                     names[p], ratios[p]);
      }
    }
  }
  return split;
}

void WriteInteractions(const std::filesystem::path& path,
                       const std::vector<Interaction>& records) {
  auto out = internal::OpenForWrite(path);
  std::string buf;
  for (const auto& r : records) {
    buf.clear();
    buf.append(std::to_string(r.user)).push_back('\t');
    buf.append(std::to_string(r.item)).push_back('\t');
    buf.push_back(r.label ? '1' : '0');
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("write failure on " + path.string());
}

std::vector<Interaction> LoadInteractions(const std::filesystem::path& path) {
  std::vector<Interaction> records;
  internal::ForEachLine(path, [&](std::string_view line, std::size_t number) {
    if (internal::Trim(line).empty()) return;
    const auto fields = internal::SplitFields(internal::Trim(line), "\t");
    std::uint64_t u = 0, v = 0, y = 0;
    if (fields.size() != 3 || !internal::ParseIndex(fields[0], &u) ||
        !internal::ParseIndex(fields[1], &v) ||
        !internal::ParseIndex(fields[2], &y) || y > 1 ||
        u > UINT32_MAX || v > UINT32_MAX) {
      throw ParseError(path.string(), number,
                       "expected user<TAB>item<TAB>label with label in {0,1}");
    }
    records.push_back({static_cast<UserId>(u), static_cast<ItemId>(v),
                       static_cast<std::uint8_t>(y)});
  });
  return records;
}

InteractionDataset MakeDataset(std::vector<Interaction> records) {
  InteractionDataset ds;
  for (const auto& r : records) {
    ds.num_users = std::max<std::size_t>(ds.num_users, r.user + std::size_t{1});
    ds.num_items = std::max<std::size_t>(ds.num_items, r.item + std::size_t{1});
  }
  ds.records = std::move(records);
  return ds;
}

}  // namespace kgcn
