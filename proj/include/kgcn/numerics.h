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

#ifndef KGCN_NUMERICS_H_
#define KGCN_NUMERICS_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kgcn {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// g and f of the model: sum_i a_i b_i. Throws ConfigError on length mismatch.
double InnerProduct(std::span<const double> a, std::span<const double> b);

// Max-subtracted softmax; `out` may alias `scores`.
void Softmax(std::span<const double> scores, std::span<double> out);
std::vector<double> Softmax(std::span<const double> scores);

enum class Activation { kIdentity, kRelu, kTanh, kSigmoid };

inline constexpr double kProbabilityFloor = 1e-12;

double Sigmoid(double x);
// Sigmoid clamped to [1e-12, 1 - 1e-12], safe to feed into log.
double ClampedSigmoid(double x);

void Activate(std::span<double> x, Activation kind);
// d activation / d pre-activation, written in terms of the pre-activation z
// and the activation output y.
double ActivationDerivative(Activation kind, double z, double y);

// out = W x + b. Throws ConfigError on shape mismatch. `out` must not alias x.
void Affine(const Matrix& w, std::span<const double> x, std::span<const double> b,
            std::span<double> out);

// out += W^T g (backward of Affine w.r.t. x).
void AffineTransposeAccumulate(const Matrix& w, std::span<const double> g,
                               std::span<double> out);

// dW += g x^T.
void OuterAccumulate(std::span<const double> g, std::span<const double> x, Matrix* dw);

// Central differences (f(x + eps) - f(x - eps)) / (2 eps) for every coordinate
// of `coords`; f reads the coordinates through whatever aliasing the caller
// set up. Coordinates are restored bit-exactly.
std::vector<double> FiniteDifferenceGradient(const std::function<double()>& f,
                                             std::span<double> coords,
                                             double eps = 1e-6);

}  // namespace kgcn

#endif  // KGCN_NUMERICS_H_
