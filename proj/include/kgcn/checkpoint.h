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

#ifndef KGCN_CHECKPOINT_H_
#define KGCN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>

#include "kgcn/params.h"

namespace kgcn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary layout, all integers and floats little-endian:
//   "KGCN" | u32 version | u64 users | u64 entities | u64 relation rows |
//   u64 dim | u64 depth | u32 aggregator tag |
//   f64 tables in ParameterStore::Blocks() order, row-major.
void SaveCheckpoint(const std::filesystem::path& path, const ParameterStore& params);
ParameterStore LoadCheckpoint(const std::filesystem::path& path);

}  // namespace kgcn

#endif  // KGCN_CHECKPOINT_H_
