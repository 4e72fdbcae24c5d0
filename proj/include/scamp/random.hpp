// Copyright 2026 The scamp Authors
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

// Counter-based random streams: the stream for trial i is a pure function of
// (seed, i), so a Monte Carlo run gives the same answer however its trials
// are scheduled across workers.

#ifndef SCAMP_RANDOM_HPP_
#define SCAMP_RANDOM_HPP_

#include <cstdint>
#include <limits>

namespace scamp {

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Independent seed for sub-task `index` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::mix64(detail::mix64(seed ^ 0x5ca3b1e5d00dfeedULL) +
                       detail::kGoldenGamma * (index + 1));
}

/// SplitMix64 sequence whose starting state is keyed on (seed, trial index).
/// Satisfies UniformRandomBitGenerator so <random> distributions accept it.
class TrialStream {
 public:
  using result_type = std::uint64_t;

  TrialStream(std::uint64_t seed, std::uint64_t trial_index)
      : state_(derive_seed(seed, trial_index)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += detail::kGoldenGamma;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace scamp

#endif  // SCAMP_RANDOM_HPP_
