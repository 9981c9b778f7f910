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
#include <vector>

#include "cranhl/nn/tensor.hpp"

namespace cranhl::nn {

// Record of executed differentiable operations. Each op pushes one closure
// that propagates adjoints from its output to its inputs; backward() runs
// them in exact reverse execution order.
class Tape {
 public:
  void push(std::function<void()> backward_fn) {
    ops_.push_back(std::move(backward_fn));
  }

  std::size_t size() const { return ops_.size(); }

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape backwards. The record is
  // consumed: intermediates are released, parameter gradients remain.
  void backward(Tensor& loss) {
    if (loss.size() != 1) {
      throw InvalidShapeError("tape: backward needs a scalar loss");
    }
    loss.grad()[0] += 1.0;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
    clear();
  }

  void clear() { ops_.clear(); }

 private:
  std::vector<std::function<void()>> ops_;
};

}  // namespace cranhl::nn
