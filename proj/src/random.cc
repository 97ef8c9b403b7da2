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

#include "dpci/random.h"

#include <bit>
#include <cmath>
#include <numbers>

namespace dpci {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

void RandomSource::FillNormal(std::span<double> out, double mean, double sd) {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const double radius = std::sqrt(-2.0 * std::log(Uniform()));
    const double angle = 2.0 * std::numbers::pi * Uniform();
    out[i] = mean + sd * radius * std::cos(angle);
    if (i + 1 < out.size()) out[i + 1] = mean + sd * radius * std::sin(angle);
  }
}

double SeededRandom::Uniform() {
  // 53 random bits centred in their cell, so 0 and 1 are never produced.
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

void SeededRandom::FillNormal(std::span<double> out, double mean, double sd) {
  for (double& v : out) v = mean + sd * normal_(engine_);
}

std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = Mix64(master + kGolden);
  for (std::uint64_t w : words) h = Mix64(h ^ Mix64(w + kGolden));
  return h;
}

std::uint64_t DoubleBits(double value) {
  return std::bit_cast<std::uint64_t>(value);
}

}  // namespace dpci
