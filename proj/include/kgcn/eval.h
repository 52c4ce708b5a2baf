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

#ifndef KGCN_EVAL_H_
#define KGCN_EVAL_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kgcn/data_ingest.h"

namespace kgcn {

struct ScoredRecord {
  UserId user = 0;
  ItemId item = 0;
  std::uint8_t label = 0;
  double score = 0.0;
};

// Mann-Whitney AUC from midrank sums. Throws DataError if either class is
// missing.
double Auc(std::span<const ScoredRecord> records);

// F1 of the rule "predict 1 iff score >= threshold"; 0 when P + R == 0.
double F1(std::span<const ScoredRecord> records, double threshold = 0.5);

// Scores the pairs (users[i], items[i]) into scores[i]. Must be safe to call
// concurrently from several threads.
using BatchScorer = std::function<void(std::span<const UserId> users,
                                       std::span<const ItemId> items, std::span<double> scores)>;

// Ranks all items not in `train_positives` by score (ties broken by ascending
// item index) and returns |top-k ∩ test_positives| / |test_positives|.
double RecallAtK(const BatchScorer& scorer, UserId user, std::size_t k,
                 std::span<const ItemId> train_positives,
                 std::span<const ItemId> test_positives, std::size_t num_items);

struct CtrReport {
  double auc = 0.0;
  double f1 = 0.0;
  std::size_t records = 0;
};

// Scores every record and reports AUC / F1. Throws DataError on empty input.
CtrReport CtrEval(const BatchScorer& scorer, std::span<const Interaction> records,
                  std::size_t threads = 1);

struct TopKReport {
  std::vector<std::size_t> k_list;
  std::vector<double> mean_recall;  // parallel to k_list
  std::size_t users = 0;            // users with >= 1 test positive
};

inline const std::vector<std::size_t> kDefaultKList = {1, 2, 5, 10, 20, 50, 100};

// Mean Recall@k over users with at least one positive in `test`, excluding
// each user's positives in `train` from the candidate set.
TopKReport TopKEval(const BatchScorer& scorer, std::span<const Interaction> train,
                    std::span<const Interaction> test, std::size_t num_items,
                    const std::vector<std::size_t>& k_list = kDefaultKList,
                    std::size_t threads = 1);

}  // namespace kgcn

#endif  // KGCN_EVAL_H_
