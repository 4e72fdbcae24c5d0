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

// Exponentially scaled modified Bessel function of the first kind, order 0.

#ifndef SCAMP_BESSEL_HPP_
#define SCAMP_BESSEL_HPP_

#include <cmath>
#include <limits>
#include <numbers>

#include "scamp/errors.hpp"

namespace scamp {

namespace detail {

// Below this the ascending series is summed; above it the Hankel asymptotic
// expansion reaches full double precision well before it starts to diverge
// (its smallest term is about exp(-2x)).
inline constexpr double kBesselSeriesLimit = 25.0;

// sum_k (x^2/4)^k / (k!)^2, all terms positive so no cancellation.
inline double bessel_i0_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon() * 0.5) break;
  }
  return sum;
}

// sqrt(2*pi*x) * exp(-x) * I0(x) ~ sum_k ((2k-1)!!)^2 / (k! (8x)^k)
inline double bessel_i0_scaled_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon() * 0.5) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace detail

/// exp(-x) * I0(x) for x >= 0. Equals 1 at the origin, strictly decreasing,
/// and never overflows.
inline double bessel_i0_scaled(double x) {
  if (!(x >= 0.0) || std::isinf(x)) {
    throw InvalidArgument("bessel_i0_scaled: argument must be finite and >= 0");
  }
  if (x <= detail::kBesselSeriesLimit) {
    return std::exp(-x) * detail::bessel_i0_series(x);
  }
  return detail::bessel_i0_scaled_asymptotic(x);
}

}  // namespace scamp

#endif  // SCAMP_BESSEL_HPP_
