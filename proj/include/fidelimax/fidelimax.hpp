// Copyright 2026 The fidelimax authors
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

#ifndef FIDELIMAX_FIDELIMAX_HPP
#define FIDELIMAX_FIDELIMAX_HPP

#include "fidelimax/apg.hpp"
#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/linalg.hpp"
#include "fidelimax/mle.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/pauli.hpp"
#include "fidelimax/risk.hpp"
#include "fidelimax/rng.hpp"
#include "fidelimax/saddle.hpp"
#include "fidelimax/schemes.hpp"
#include "fidelimax/serialization.hpp"
#include "fidelimax/sha256.hpp"
#include "fidelimax/simulator.hpp"

#endif  // FIDELIMAX_FIDELIMAX_HPP
