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

#include "deepoint/common/random.h"

#include <cmath>

namespace deepoint {
namespace {

uint64_t Fnv1a(uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // Separator so that ("ab","c") and ("a","bc") differ.
  h ^= 0xff;
  h *= 0x100000001b3ULL;
  return h;
}

}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t base, std::string_view tag_a,
                    std::string_view tag_b) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = Fnv1a(h, tag_a);
  h = Fnv1a(h, tag_b);
  return SplitMix64(SplitMix64(base) ^ h);
}

// The standard distributions are implementation-defined; these two are
// written out so generated data is identical across standard libraries.
double Uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Normal(Rng& rng, double mean, double sigma) {
  double u1 = 0.0;
  do {
    u1 = Uniform(rng, 0.0, 1.0);
  } while (u1 <= 0.0);
  const double u2 = Uniform(rng, 0.0, 1.0);
  return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * M_PI * u2);
}

}  // namespace deepoint
