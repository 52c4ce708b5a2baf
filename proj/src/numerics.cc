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

#include "kgcn/numerics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgcn/error.h"

namespace kgcn {

double InnerProduct(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("inner product of vectors with lengths " +
                      std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void Softmax(std::span<const double> scores, std::span<double> out) {
  if (scores.empty()) return;
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    z += out[i];
  }
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] /= z;
}

std::vector<double> Softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  Softmax(scores, out);
  return out;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double ClampedSigmoid(double x) {
  return std::clamp(Sigmoid(x), kProbabilityFloor, 1.0 - kProbabilityFloor);
}

void Activate(std::span<double> x, Activation kind) {
  switch (kind) {
    case Activation::kIdentity:
      return;
    case Activation::kRelu:
      for (double& v : x) v = v > 0.0 ? v : 0.0;
      return;
    case Activation::kTanh:
      for (double& v : x) v = std::tanh(v);
      return;
    case Activation::kSigmoid:
      for (double& v : x) v = ClampedSigmoid(v);
      return;
  }
}

double ActivationDerivative(Activation kind, double z, double y) {
  switch (kind) {
    case Activation::kIdentity:
      return 1.0;
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - y * y;
    case Activation::kSigmoid:
      return y * (1.0 - y);
  }
  return 0.0;
}

void Affine(const Matrix& w, std::span<const double> x, std::span<const double> b,
            std::span<double> out) {
  if (w.cols() != x.size() || w.rows() != b.size() || w.rows() != out.size()) {
    throw ConfigError("affine shape mismatch: W is " + std::to_string(w.rows()) + "x" +
                      std::to_string(w.cols()) + ", x has " + std::to_string(x.size()) +
                      ", b has " + std::to_string(b.size()));
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    double s = b[r];
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
    out[r] = s;
  }
}

void AffineTransposeAccumulate(const Matrix& w, std::span<const double> g,
                               std::span<double> out) {
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    const auto row = w.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * gr;
  }
}

void OuterAccumulate(std::span<const double> g, std::span<const double> x, Matrix* dw) {
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    auto row = dw->row(r);
    for (std::size_t c = 0; c < x.size(); ++c) row[c] += gr * x[c];
  }
}

std::vector<double> FiniteDifferenceGradient(const std::function<double()>& f,
                                             std::span<double> coords, double eps) {
  std::vector<double> grad(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double saved = coords[i];
    coords[i] = saved + eps;
    const double plus = f();
    coords[i] = saved - eps;
    const double minus = f();
    coords[i] = saved;
    grad[i] = (plus - minus) / (2.0 * eps);
  }
  return grad;
}

}  // namespace kgcn
