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

#ifndef SCAMP_SCAMP_HPP_
#define SCAMP_SCAMP_HPP_

#include "scamp/analytic.hpp"
#include "scamp/bessel.hpp"
#include "scamp/core.hpp"
#include "scamp/errors.hpp"
#include "scamp/montecarlo.hpp"
#include "scamp/oracle.hpp"
#include "scamp/random.hpp"
#include "scamp/sweep.hpp"

#endif  // SCAMP_SCAMP_HPP_
