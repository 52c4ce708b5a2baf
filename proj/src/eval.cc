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

#include "kgcn/eval.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

#include "kgcn/error.h"
#include "kgcn/parallel.h"

namespace kgcn {

namespace {

// Candidates (all items minus train positives) sorted by descending score,
// ascending item index on ties.
std::vector<ItemId> RankCandidates(const BatchScorer& scorer, UserId user,
                                   std::span<const ItemId> train_positives,
                                   std::size_t num_items) {
  std::vector<char> excluded(num_items, 0);
  for (ItemId v : train_positives) {
    if (v < num_items) excluded[v] = 1;
  }
  std::vector<ItemId> items;
  items.reserve(num_items);
  for (std::size_t v = 0; v < num_items; ++v) {
    if (!excluded[v]) items.push_back(static_cast<ItemId>(v));
  }
  std::vector<UserId> users(items.size(), user);
  std::vector<double> scores(items.size());
  scorer(users, items, scores);
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return items[a] < items[b];
  });
  std::vector<ItemId> ranked(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) ranked[i] = items[order[i]];
  return ranked;
}

// Number of test positives among the first k ranked items, for every k.
std::vector<double> RecallCurve(const std::vector<ItemId>& ranked,
                                std::span<const ItemId> test_positives,
                                const std::vector<std::size_t>& k_list) {
  const std::unordered_set<ItemId> relevant(test_positives.begin(), test_positives.end());
  std::vector<double> recalls;
  recalls.reserve(k_list.size());
  for (std::size_t k : k_list) {
    const std::size_t limit = std::min(k, ranked.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < limit; ++i) hits += relevant.count(ranked[i]);
    recalls.push_back(relevant.empty() ? 0.0
                                       : static_cast<double>(hits) /
                                             static_cast<double>(relevant.size()));
  }
  return recalls;
}

}  // namespace

double Auc(std::span<const ScoredRecord> records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return records[a].score < records[b].score; });
  double positives = 0.0;
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && records[order[j]].score == records[order[i]].score) ++j;
    // Ranks i+1..j share the midrank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (records[order[t]].label) {
        positives += 1.0;
        rank_sum += midrank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(records.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw DataError("AUC needs at least one positive and one negative record");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

double F1(std::span<const ScoredRecord> records, double threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& r : records) {
    const bool predicted = r.score >= threshold;
    if (predicted && r.label) ++tp;
    if (predicted && !r.label) ++fp;
    if (!predicted && r.label) ++fn;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double RecallAtK(const BatchScorer& scorer, UserId user, std::size_t k,
                 std::span<const ItemId> train_positives,
                 std::span<const ItemId> test_positives, std::size_t num_items) {
  if (k == 0 || test_positives.empty()) return 0.0;
  const auto ranked = RankCandidates(scorer, user, train_positives, num_items);
  return RecallCurve(ranked, test_positives, {k}).front();
}

CtrReport CtrEval(const BatchScorer& scorer, std::span<const Interaction> records,
                  std::size_t threads) {
  if (records.empty()) throw DataError("cannot evaluate an empty record set");
  std::vector<ScoredRecord> scored(records.size());
  ParallelFor(records.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<UserId> users;
    std::vector<ItemId> items;
    for (std::size_t i = begin; i < end; ++i) {
      users.push_back(records[i].user);
      items.push_back(records[i].item);
    }
    std::vector<double> scores(users.size());
    scorer(users, items, scores);
    for (std::size_t i = begin; i < end; ++i) {
      scored[i] = {records[i].user, records[i].item, records[i].label, scores[i - begin]};
    }
  });
  CtrReport report;
  report.records = records.size();
  report.auc = Auc(scored);
  report.f1 = F1(scored);
  return report;
}

TopKReport TopKEval(const BatchScorer& scorer, std::span<const Interaction> train,
                    std::span<const Interaction> test, std::size_t num_items,
                    const std::vector<std::size_t>& k_list, std::size_t threads) {
  if (test.empty()) throw DataError("cannot evaluate top-K on an empty test set");
  std::map<UserId, std::vector<ItemId>> train_pos;
  std::map<UserId, std::vector<ItemId>> test_pos;
  for (const auto& r : train) {
    if (r.label) train_pos[r.user].push_back(r.item);
  }
  for (const auto& r : test) {
    if (r.label) test_pos[r.user].push_back(r.item);
  }
  std::vector<UserId> users;
  for (const auto& [u, items] : test_pos) users.push_back(u);

  std::vector<std::vector<double>> per_user(users.size());
  ParallelFor(users.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    static const std::vector<ItemId> kNone;
    for (std::size_t i = begin; i < end; ++i) {
      const auto it = train_pos.find(users[i]);
      const auto& excluded = it == train_pos.end() ? kNone : it->second;
      const auto ranked = RankCandidates(scorer, users[i], excluded, num_items);
      per_user[i] = RecallCurve(ranked, test_pos.at(users[i]), k_list);
    }
  });

  TopKReport report;
  report.k_list = k_list;
  report.users = users.size();
  report.mean_recall.assign(k_list.size(), 0.0);
  for (const auto& curve : per_user) {
    for (std::size_t k = 0; k < curve.size(); ++k) report.mean_recall[k] += curve[k];
  }
  if (!users.empty()) {
    for (double& r : report.mean_recall) r /= static_cast<double>(users.size());
  }
  return report;
}

}  // namespace kgcn
