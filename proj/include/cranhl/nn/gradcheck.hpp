/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <span>
#include <string>

#include "cranhl/nn/param.hpp"
#include "cranhl/nn/tape.hpp"

namespace cranhl::nn {

struct FdCheckOptions {
  double epsilon = 1e-4;
  // 0 checks every coordinate; otherwise a seeded sample per parameter.
  std::size_t max_coords_per_param = 0;
  std::uint64_t seed = 0x9d5ec7a11;
};

struct FdCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_coord = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coords_checked = 0;
};

// Compares tape gradients against central finite differences. `loss_fn`
// must rebuild the loss from scratch each call: differentiably when handed
// a tape, plain-forward when handed nullptr. The loss must be deterministic
// (dropout off). Relative error uses max(1, |analytic|, |numeric|) as the
// denominator.
FdCheckResult finite_difference_check(
    const std::function<Tensor(Tape*)>& loss_fn,
    std::span<Parameter* const> params, const FdCheckOptions& opts = {});

}  // namespace cranhl::nn
