// Copyright 2026 The oxlab Authors.
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

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace oxlab {

// SplitMix64 finalizer. Used both as the stream generator and as the key mixer
// for deriving independent sub-streams.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a sequence of words into one key. Order matters.
constexpr uint64_t HashKey(std::initializer_list<uint64_t> words) {
  uint64_t h = 0x6a09e667f3bcc909ULL;
  for (uint64_t w : words) h = Mix64(h ^ Mix64(w));
  return h;
}

// Small counter-based generator. Every stream is identified by a 64-bit key,
// so any (run, user, request) tuple can own an independent stream without
// depending on the order in which other streams are consumed.
//
// Distributions are implemented here rather than with <random> because the
// standard distributions are implementation-defined and would break
// cross-platform golden files.
class Rng {
 public:
  explicit Rng(uint64_t key) : state_(key) {}

  uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform01() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  bool Bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return Uniform01() < p;
  }

  // Box-Muller; consumes exactly two draws per call so the draw sequence is
  // fixed regardless of caching.
  double Normal() {
    double u1 = 1.0 - Uniform01();  // (0, 1]
    double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double LogNormal(double mu, double sigma) { return std::exp(mu + sigma * Normal()); }

 private:
  uint64_t state_;
};

}  // namespace oxlab
