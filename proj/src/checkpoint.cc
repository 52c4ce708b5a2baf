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

#include "kgcn/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "kgcn/error.h"

namespace kgcn {

namespace {

constexpr std::array<char, 4> kMagic = {'K', 'G', 'C', 'N'};
// Sanity bound on any stored dimension, well above desk-scale datasets.
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

template <typename T>
void PutLe(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLe(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DataError("truncated checkpoint " + path.string());
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path, const ParameterStore& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  PutLe<std::uint32_t>(out, kCheckpointVersion);
  const auto& d = params.dims;
  PutLe<std::uint64_t>(out, d.num_users);
  PutLe<std::uint64_t>(out, d.num_entities);
  PutLe<std::uint64_t>(out, d.num_relations);
  PutLe<std::uint64_t>(out, d.dim);
  PutLe<std::uint64_t>(out, d.depth);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(d.aggregator));
  for (const auto& block : params.Blocks()) {
    for (double v : block.values) PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw IoError("write failure on " + path.string());
}

ParameterStore LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError(path.string() + " is not a KGCN checkpoint");
  }
  const auto version = GetLe<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  ModelDims d;
  std::uint64_t raw[5];
  for (auto& v : raw) {
    v = GetLe<std::uint64_t>(in, path);
    if (v > kMaxDim) throw DataError("implausible dimension in checkpoint " + path.string());
  }
  d.num_users = raw[0];
  d.num_entities = raw[1];
  d.num_relations = raw[2];
  d.dim = raw[3];
  d.depth = raw[4];
  const auto tag = GetLe<std::uint32_t>(in, path);
  if (tag > static_cast<std::uint32_t>(Aggregator::kNeighbor)) {
    throw DataError("unknown aggregator tag " + std::to_string(tag));
  }
  d.aggregator = static_cast<Aggregator>(tag);

  ParameterStore params(d);
  for (auto& block : params.Blocks()) {
    for (double& v : block.values) v = std::bit_cast<double>(GetLe<std::uint64_t>(in, path));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("trailing bytes in checkpoint " + path.string());
  }
  return params;
}

}  // namespace kgcn
