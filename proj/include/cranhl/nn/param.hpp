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

#include <cmath>
#include <cstdint>
#include <string>

#include "cranhl/nn/tensor.hpp"
#include "cranhl/rng.hpp"

namespace cranhl::nn {

// A learnable tensor: its gradient buffer lives inside `value`, the Adam
// moments and step count next to it.
struct Parameter {
  std::string name;
  Tensor value;
  std::vector<double> adam_m;
  std::vector<double> adam_v;
  std::int64_t step_count = 0;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
    value.set_needs_grad(true);
  }

  std::size_t size() const { return value.size(); }
  bool has_grad() const { return value.has_grad(); }
  std::vector<double>& grad() { return value.grad(); }
  void clear_grad() { value.drop_grad(); }
};

// Glorot-uniform initialization: U(-limit, limit), limit = sqrt(6/(fi+fo)).
inline Tensor glorot_uniform(Rng& rng, Shape shape, std::size_t fan_in,
                             std::size_t fan_out) {
  Tensor t(std::move(shape));
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = rng.uniform(-limit, limit);
  }
  return t;
}

}  // namespace cranhl::nn
