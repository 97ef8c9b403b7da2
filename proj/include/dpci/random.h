// Copyright 2026 The dpci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPCI_RANDOM_H_
#define DPCI_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace dpci {

// All randomness in the toolkit flows through a RandomSource passed in by the
// caller. Instances are not thread-safe; give each thread its own.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // A draw from the open interval (0, 1).
  virtual double Uniform() = 0;

  // Fills `out` with independent N(mean, sd^2) draws. The default uses
  // Box-Muller on Uniform(), so a fake only has to provide Uniform().
  virtual void FillNormal(std::span<double> out, double mean, double sd);
};

// Deterministic stream from a 64-bit seed: same seed, same draws.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  double Uniform() override;
  void FillNormal(std::span<double> out, double mean, double sd) override;

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Seed splitting. Starting from h = Mix(master + 0x9e3779b97f4a7c15), every
// word w is folded in as h = Mix(h ^ Mix(w + 0x9e3779b97f4a7c15)), where Mix
// is the SplitMix64 finalizer. Doubles enter through their IEEE-754 bits.
std::uint64_t Mix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> words);
std::uint64_t DoubleBits(double value);

}  // namespace dpci

#endif  // DPCI_RANDOM_H_
