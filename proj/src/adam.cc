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

#include "kgcn/adam.h"

#include <cmath>

#include "kgcn/error.h"

namespace kgcn {

void AdamStep(ParameterStore* params, const ParameterStore& grads, AdamState* state,
              double learning_rate, double l2) {
  if (!(params->dims == grads.dims) || !(params->dims == state->first_moment.dims)) {
    throw ConfigError("Adam step: parameter, gradient and state shapes differ");
  }
  const auto g_blocks = grads.Blocks();
  for (const auto& b : g_blocks) {
    // g * 0 is NaN exactly when g is inf or NaN; the branch-free form vectorizes.
    double probe = 0.0;
    for (double g : b.values) probe += g * 0.0;
    if (probe != 0.0) {
      throw NumericError("non-finite gradient in parameter block '" + b.name + "'");
    }
  }

  ++state->step;
  const auto& cfg = state->config;
  const double t = static_cast<double>(state->step);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);

  auto p_blocks = params->Blocks();
  auto m_blocks = state->first_moment.Blocks();
  auto v_blocks = state->second_moment.Blocks();
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    auto theta = p_blocks[b].values;
    const auto grad = g_blocks[b].values;
    auto m = m_blocks[b].values;
    auto v = v_blocks[b].values;
    double* __restrict tp = theta.data();
    const double* __restrict gp = grad.data();
    double* __restrict mp = m.data();
    double* __restrict vp = v.data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double g = gp[i] + 2.0 * l2 * tp[i];
      mp[i] = cfg.beta1 * mp[i] + (1.0 - cfg.beta1) * g;
      vp[i] = cfg.beta2 * vp[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = mp[i] / bias1;
      const double v_hat = vp[i] / bias2;
      tp[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace kgcn
