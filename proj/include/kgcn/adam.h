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

#ifndef KGCN_ADAM_H_
#define KGCN_ADAM_H_

#include <cstdint>

#include "kgcn/params.h"

namespace kgcn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  ParameterStore first_moment;
  ParameterStore second_moment;
  std::uint64_t step = 0;

  AdamState() = default;
  explicit AdamState(const ModelDims& dims, AdamConfig cfg = {})
      : config(cfg), first_moment(dims), second_moment(dims) {}
};

// One bias-corrected Adam update over every parameter. The L2 term enters as
// 2 * l2 * theta added to each gradient coordinate before the moment updates,
// so untouched embedding rows still decay. Throws NumericError naming the
// block if `grads` holds a non-finite value; nothing is modified in that case.
void AdamStep(ParameterStore* params, const ParameterStore& grads, AdamState* state,
              double learning_rate, double l2);

}  // namespace kgcn

#endif  // KGCN_ADAM_H_
