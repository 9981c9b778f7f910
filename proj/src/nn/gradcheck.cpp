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

#include "cranhl/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace cranhl::nn {

FdCheckResult finite_difference_check(
    const std::function<Tensor(Tape*)>& loss_fn,
    std::span<Parameter* const> params, const FdCheckOptions& opts) {
  // Analytic pass.
  for (Parameter* p : params) p->clear_grad();
  Tape tape;
  Tensor loss = loss_fn(&tape);
  tape.backward(loss);

  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    analytic.push_back(p->has_grad() ? p->grad()
                                     : std::vector<double>(p->size(), 0.0));
    p->clear_grad();
  }

  Rng rng(opts.seed);
  FdCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    const std::size_t n = p->size();

    std::vector<std::size_t> coords;
    if (opts.max_coords_per_param == 0 || n <= opts.max_coords_per_param) {
      coords.resize(n);
      for (std::size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      for (std::size_t i = 0; i < opts.max_coords_per_param; ++i) {
        coords.push_back(rng.uniform_index(n));
      }
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    }

    for (std::size_t i : coords) {
      double* slot = p->value.data() + i;
      const double saved = *slot;
      *slot = saved + opts.epsilon;
      const double plus = loss_fn(nullptr).item();
      *slot = saved - opts.epsilon;
      const double minus = loss_fn(nullptr).item();
      *slot = saved;

      const double numeric = (plus - minus) / (2.0 * opts.epsilon);
      const double exact = analytic[pi][i];
      const double denom =
          std::max({1.0, std::abs(exact), std::abs(numeric)});
      const double rel = std::abs(exact - numeric) / denom;
      ++result.coords_checked;
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst_param = p->name;
        result.worst_coord = i;
        result.analytic = exact;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace cranhl::nn
