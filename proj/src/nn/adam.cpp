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

#include "cranhl/nn/adam.hpp"

#include <cmath>

namespace cranhl::nn {

void adam_step(std::span<Parameter* const> params, const AdamOptions& opts) {
  for (Parameter* p : params) {
    if (!p->has_grad()) {
      throw ContractViolation("adam_step: parameter '" + p->name +
                              "' has no gradient");
    }
    const std::size_t n = p->size();
    if (p->adam_m.size() != n) p->adam_m.assign(n, 0.0);
    if (p->adam_v.size() != n) p->adam_v.assign(n, 0.0);

    const double lr_t =
        opts.lr / (1.0 + opts.lr_decay * static_cast<double>(p->step_count));
    p->step_count += 1;
    const double t = static_cast<double>(p->step_count);
    const double bc1 = 1.0 - std::pow(opts.beta1, t);
    const double bc2 = 1.0 - std::pow(opts.beta2, t);

    std::vector<double>& g = p->grad();
    double* value = p->value.data();
    for (std::size_t i = 0; i < n; ++i) {
      double gi = g[i];
      if (opts.weight_decay_l2 != 0.0) gi += opts.weight_decay_l2 * value[i];
      p->adam_m[i] = opts.beta1 * p->adam_m[i] + (1.0 - opts.beta1) * gi;
      p->adam_v[i] = opts.beta2 * p->adam_v[i] + (1.0 - opts.beta2) * gi * gi;
      const double m_hat = p->adam_m[i] / bc1;
      const double v_hat = p->adam_v[i] / bc2;
      value[i] -= lr_t * m_hat / (std::sqrt(v_hat) + opts.eps);
    }
    p->value.check_finite("adam_step");
    p->clear_grad();
  }
}

}  // namespace cranhl::nn
