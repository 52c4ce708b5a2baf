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

// Command-line front end: preprocess, train, evaluate, sweep and predict.

#include <CLI11.hpp>
#include <iostream>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kgcn/commands.h"
#include "kgcn/data_ingest.h"
#include "kgcn/error.h"

namespace {

using namespace kgcn;
namespace cli = kgcn::cli;

// Options shared by `train` and `sweep`, bound directly to a TrainOptions.
struct TrainFlags {
  std::string model = "kgcn";
  std::string aggregator = "sum";
  std::string ratios = "6:2:2";
  std::uint64_t split_seed = 0;
  CLI::Option* split_seed_opt = nullptr;
};

void AddTrainFlags(CLI::App* app, cli::TrainOptions* o, TrainFlags* f) {
  app->add_option("--ratings", o->ratings, "Final ratings file (user item label)")
      ->required();
  app->add_option("--kg", o->kg, "Final KG file (head relation tail)")
      ->required();
  app->add_option("--out-dir", o->out_dir, "Output directory")->required();
  app->add_option("--model", f->model, "kgcn or mf")->capture_default_str();
  app->add_option("-K,--K", o->model.neighbor_sample, "Sampled neighbors per entity")
      ->capture_default_str();
  app->add_option("-d,--d", o->model.dim, "Embedding dimension")->capture_default_str();
  app->add_option("-H,--H", o->model.depth, "Receptive-field depth")->capture_default_str();
  app->add_option("--aggregator", f->aggregator, "sum, concat or neighbor")
      ->capture_default_str();
  app->add_flag("--uniform-weights", o->model.uniform_weights,
                "Average neighbors uniformly instead of user-relation attention");
  app->add_option("--lambda", o->train.l2, "L2 weight")->capture_default_str();
  app->add_option("--eta", o->train.learning_rate, "Adam learning rate")->capture_default_str();
  app->add_option("--batch-size", o->train.batch_size)->capture_default_str();
  app->add_option("--epochs", o->train.max_epochs)->capture_default_str();
  app->add_option("--eval-every", o->train.eval_every)->capture_default_str();
  app->add_option("--seed", o->train.seed, "Seed for init, sampling and shuffling")
      ->capture_default_str();
  f->split_seed_opt =
      app->add_option("--split-seed", f->split_seed, "Seed for the 6:2:2 split (default: --seed)");
  app->add_option("--ratio", f->ratios, "train:validation:test ratios")->capture_default_str();
  app->add_option("--repeat", o->repeat, "Independent runs")->capture_default_str();
  app->add_option("--threads", o->train.threads)->capture_default_str();
}

void FinishTrainFlags(cli::TrainOptions* o, const TrainFlags& f) {
  o->model.kind = ParseModelKind(f.model);
  o->model.aggregator = ParseAggregator(f.aggregator);
  o->ratios = cli::ParseRatios(f.ratios);
  if (*f.split_seed_opt) o->split_seed = f.split_seed;
}

int Run(int argc, char** argv) {
  CLI::App app{"KGCN knowledge-graph recommender"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->capture_default_str();

  // preprocess
  cli::PreprocessOptions pre;
  std::string delimiter = "tab";
  std::optional<double> threshold;
  auto* p = app.add_subcommand("preprocess", "Convert raw ratings and KG into indexed files");
  p->add_option("--ratings", pre.ratings)->required();
  p->add_option("--item2entity", pre.item2entity)->required();
  p->add_option("--kg", pre.kg)->required();
  p->add_option("--out-dir", pre.out_dir)->required();
  p->add_option("--delimiter", delimiter, "tab, comma, semicolon or a literal string")
      ->capture_default_str();
  p->add_flag("--skip-header", pre.format.skip_header);
  p->add_option("--threshold", threshold, "Keep ratings >= threshold as positives");
  p->add_option("--seed", pre.seed, "Negative sampling seed")->capture_default_str();

  // train
  cli::TrainOptions train;
  TrainFlags train_flags;
  auto* t = app.add_subcommand("train", "Train and test one configuration");
  AddTrainFlags(t, &train, &train_flags);

  // evaluate
  cli::EvaluateOptions ev;
  std::string ev_data;
  auto* e = app.add_subcommand("evaluate", "Score a checkpoint (ctr or topk)");
  e->add_option("--checkpoint", ev.checkpoint)->required();
  auto* ev_data_opt = e->add_option("--data", ev_data, "Records to score (default: test split)");
  e->add_option("--mode", ev.mode, "ctr or topk")
      ->check(CLI::IsMember({"ctr", "topk"}))
      ->capture_default_str();
  e->add_option("--k-list", ev.k_list, "Cutoffs for topk")->delimiter(',');
  e->add_option("--threads", ev.threads)->capture_default_str();

  // sweep
  cli::SweepOptions sw;
  TrainFlags sweep_flags;
  std::string sweep_param;
  std::string sweep_csv;
  auto* s = app.add_subcommand("sweep", "Vary K, H or d and report test AUC/F1");
  AddTrainFlags(s, &sw.base, &sweep_flags);
  s->add_option("--param", sweep_param, "K, H or d")->required();
  s->add_option("--values", sw.values, "Comma-separated values")->required()->delimiter(',');
  auto* sweep_csv_opt = s->add_option("--csv", sweep_csv, "Also write the table here");

  // predict
  cli::PredictOptions pr;
  std::vector<ItemId> pr_items;
  auto* q = app.add_subcommand("predict", "Rank items for one user");
  q->add_option("--checkpoint", pr.checkpoint)->required();
  q->add_option("--user", pr.user, "Dense user index")->required();
  q->add_option("--items", pr_items, "Candidate items (default: all)")->delimiter(',');
  q->add_option("--top", pr.top)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  auto logger = spdlog::stderr_color_mt("kgcn");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");

  try {
    if (*p) {
      pre.format.delimiter = ParseDelimiterName(delimiter);
      pre.threshold = threshold;
      cli::Preprocess(pre, std::cout);
    } else if (*t) {
      FinishTrainFlags(&train, train_flags);
      cli::Train(train, std::cout);
    } else if (*e) {
      if (*ev_data_opt) ev.data = ev_data;
      cli::Evaluate(ev, std::cout);
    } else if (*s) {
      FinishTrainFlags(&sw.base, sweep_flags);
      sw.parameter = ParseSweepParameter(sweep_param);
      if (*sweep_csv_opt) sw.csv = sweep_csv;
      cli::Sweep(sw, std::cout);
    } else if (*q) {
      if (!pr_items.empty()) pr.items = pr_items;
      cli::Predict(pr, std::cout);
    }
  } catch (const std::exception& ex) {
    spdlog::error("{}", ex.what());
    return cli::ExitCodeFor(ex);
  }
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return Run(argc, argv); }
