// Copyright 2026 The Authors.
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

#ifndef INCSET_COMMON_H_
#define INCSET_COMMON_H_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace incset {

using ItemId = std::uint32_t;
using MachineId = std::uint32_t;
using QueryId = std::uint32_t;
using ClusterId = std::uint32_t;

// Sorted, duplicate-free sequence of item ids. Every set operation in the
// library works on this representation.
using ItemSet = std::vector<ItemId>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UncoverableItemError : public Error {
 public:
  explicit UncoverableItemError(ItemId item)
      : Error("item " + std::to_string(item) + " is not held by any machine"),
        item_(item) {}
  ItemId item() const { return item_; }

 private:
  ItemId item_;
};

// Seeded generator with platform-independent derived distributions. The
// standard <random> distributions are implementation-defined, which would
// break byte-identical outputs across toolchains.
namespace internal {

// Unbiased integer in [0, bound) by rejection; bound must be positive.
template <typename Engine>
std::uint64_t UniformBelow(Engine& next, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

}  // namespace internal

// Portable seeded generator. The engine's output sequence is fixed by the
// standard and the distributions are implemented here, so streams agree
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t Uniform(std::uint64_t bound) {
    return internal::UniformBelow(engine_, bound);
  }

  // Uniform integer in [lo, hi].
  std::uint64_t UniformIn(std::uint64_t lo, std::uint64_t hi) {
    return lo + Uniform(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 stream: trivially cheap to construct, for short per-query draws.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t Uniform(std::uint64_t bound) {
    return internal::UniformBelow(*this, bound);
  }

 private:
  std::uint64_t state_;
};

// Stateless 64-bit mixer, used to derive independent per-query seeds.
inline std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Sorts and removes duplicates in place.
void Normalize(ItemSet& items);

ItemSet Intersect(std::span<const ItemId> a, std::span<const ItemId> b);
ItemSet Union(std::span<const ItemId> a, std::span<const ItemId> b);
ItemSet Difference(std::span<const ItemId> a, std::span<const ItemId> b);
std::size_t IntersectionSize(std::span<const ItemId> a,
                             std::span<const ItemId> b);
bool IsSubset(std::span<const ItemId> sub, std::span<const ItemId> super);

}  // namespace incset

#endif  // INCSET_COMMON_H_
