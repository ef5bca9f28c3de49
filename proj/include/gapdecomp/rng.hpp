// Copyright 2026 The gapdecomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAPDECOMP_RNG_HPP_
#define GAPDECOMP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace gapdecomp {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64_bytes(std::uint64_t h, const void* data,
                                   std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::uint64_t>(p[i]);
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t h, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  return fnv1a64_bytes(h, bytes, 8);
}

// Sub-stream seed derived from a master seed and a string tag (e.g. a record
// id). Processing order never changes the stream a consumer sees.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = fnv1a64_u64(kFnvOffset, seed);
  return fnv1a64_bytes(h, tag.data(), tag.size());
}

// Sub-stream seed from a master seed plus numeric context (class index,
// trial index, role).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
  std::uint64_t h = fnv1a64_u64(kFnvOffset, seed);
  return fnv1a64_u64(h, a);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t h = fnv1a64_u64(kFnvOffset, seed);
  h = fnv1a64_u64(h, a);
  return fnv1a64_u64(h, b);
}

// Deterministic random source. All draw rules are fixed here rather than
// delegated to <random> distributions: mt19937_64 output is bit-exact across
// standard libraries, the distributions are not. Current draw rules:
//   uniform_index(n)  = next_u64() % n          (bias <= n / 2^64)
//   uniform01()       = (next_u64() >> 11) * 2^-53, in [0, 1)
//   normal()          = Box-Muller on (u1, u2), u1 in (0, 1], pair cached
//   shuffle(v)        = Fisher-Yates, i = n-1..1, j = uniform_index(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i + 1));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gapdecomp

#endif  // GAPDECOMP_RNG_HPP_
