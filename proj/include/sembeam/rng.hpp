// SPDX-License-Identifier: Apache-2.0
//
// sembeam — beamforming for semantic/bit coexisting MU-MISO downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace sembeam {

// Splittable 64-bit generator built on the splitmix64 step. The state is a
// single word and streams derived from (seed, stream index) are independent,
// so per-trial generators for Monte-Carlo sweeps can be created without any
// shared mutable state. All distribution transforms are implemented inline
// (no std::*_distribution) so that a given seed produces the same sequence
// on every platform for a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(finalize(seed + kGamma)) {}

  // Independent generator for one stream of a seeded family, e.g. one
  // Monte-Carlo trial.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed);
    r.state_ = finalize(r.state_ + finalize(stream + kStreamSalt));
    return r;
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return finalize(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal N(0, 1); consumes one Box-Muller pair per call.
  double gaussian() {
    const double u1 = positive_uniform();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Circularly symmetric CN(0, 1): real and imaginary parts N(0, 1/2),
  // drawn from a single Box-Muller pair.
  std::complex<double> complex_gaussian() {
    const double u1 = positive_uniform();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

  std::uint64_t state() const { return state_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; keeps log() finite.
  double positive_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t state_;
};

}  // namespace sembeam
