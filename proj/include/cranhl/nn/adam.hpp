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

#include <span>

#include "cranhl/nn/param.hpp"

namespace cranhl::nn {

// Adam with bias correction. `lr_decay` shrinks the step size over time as
// lr_t = lr / (1 + lr_decay * t) with t counting previous steps (so the
// first step uses the undecayed rate); `weight_decay_l2` optionally adds an
// L2 term to the gradient before the moment updates.
struct AdamOptions {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr_decay = 0.01;
  double weight_decay_l2 = 0.0;
};

// Applies one update to every parameter and clears the gradients.
// A parameter without a populated gradient is a contract violation.
void adam_step(std::span<Parameter* const> params,
               const AdamOptions& opts = {});

}  // namespace cranhl::nn
