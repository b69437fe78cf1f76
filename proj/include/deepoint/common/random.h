// Copyright 2026 The deepoint Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPOINT_COMMON_RANDOM_H_
#define DEEPOINT_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace deepoint {

using Rng = std::mt19937_64;

uint64_t SplitMix64(uint64_t x);

// Seed for an independent random stream identified by (base, tags...).
// Stable across platforms: FNV-1a over the tag bytes mixed with splitmix64.
uint64_t DeriveSeed(uint64_t base, std::string_view tag_a,
                    std::string_view tag_b = {});

double Uniform(Rng& rng, double lo, double hi);
double Normal(Rng& rng, double mean, double sigma);

}  // namespace deepoint

#endif  // DEEPOINT_COMMON_RANDOM_H_
