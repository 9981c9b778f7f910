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

#include "cranhl/nn/lstm.hpp"

namespace cranhl::nn {

namespace {

// Splits the stacked gate pre-activation [4H] into the four gate vectors.
struct Gates {
  Tensor input, forget, cell, output;
};

Tensor slice_vec(Tape* tape, const Tensor& v, std::size_t offset,
                 std::size_t len) {
  Tensor out({len});
  std::copy(v.data() + offset, v.data() + offset + len, out.data());
  out.set_needs_grad(v.needs_grad());
  if (tape && v.needs_grad()) {
    Tensor src = v;
    tape->push([src, out, offset, len]() mutable {
      const std::vector<double>& g = out.grad();
      std::vector<double>& gi = src.grad();
      for (std::size_t i = 0; i < len; ++i) gi[offset + i] += g[i];
    });
  }
  return out;
}

// One LSTM cell step. Returns (h, c).
std::pair<Tensor, Tensor> lstm_step(Tape* tape, const LstmDirWeights& w,
                                    const Tensor& x, const Tensor& h_prev,
                                    const Tensor& c_prev, std::size_t hidden) {
  Tensor pre_x = dense(tape, x, w.w_ih, w.b);
  Tensor pre_h = dense(tape, h_prev, w.w_hh, Tensor{});
  Tensor pre = add(tape, pre_x, pre_h);

  Gates g;
  g.input = sigmoid(tape, slice_vec(tape, pre, 0, hidden));
  g.forget = sigmoid(tape, slice_vec(tape, pre, hidden, hidden));
  g.cell = tanh_op(tape, slice_vec(tape, pre, 2 * hidden, hidden));
  g.output = sigmoid(tape, slice_vec(tape, pre, 3 * hidden, hidden));

  Tensor c = add(tape, elementwise_mul(tape, g.forget, c_prev),
                 elementwise_mul(tape, g.input, g.cell));
  Tensor h = elementwise_mul(tape, g.output, tanh_op(tape, c));
  return {h, c};
}

// Runs one direction over the sequence. `reversed` walks t = T-1 .. 0.
// Returns per-step hidden states indexed by original time plus the state
// after the full sweep.
std::pair<std::vector<Tensor>, Tensor> run_direction(
    Tape* tape, const std::vector<Tensor>& steps, const LstmDirWeights& w,
    std::size_t hidden, bool reversed) {
  const std::size_t t_n = steps.size();
  std::vector<Tensor> hs(t_n);
  Tensor h({hidden});
  Tensor c({hidden});
  for (std::size_t i = 0; i < t_n; ++i) {
    const std::size_t t = reversed ? t_n - 1 - i : i;
    auto [h_next, c_next] = lstm_step(tape, w, steps[t], h, c, hidden);
    h = h_next;
    c = c_next;
    hs[t] = h;
  }
  return {std::move(hs), h};
}

}  // namespace

BiLstmOut bilstm(Tape* tape, const Tensor& sequence, const BiLstmWeights& w,
                 double input_dropout, bool training, Rng* rng) {
  if (sequence.rank() != 2 || sequence.dim(0) < 1) {
    throw InvalidShapeError("bilstm: sequence must be [T x D] with T >= 1");
  }
  if (w.layers.empty()) throw InvalidConfigError("bilstm: no layers");
  if (input_dropout > 0.0 && training && rng == nullptr) {
    throw InvalidConfigError("bilstm: dropout needs an rng");
  }
  const std::size_t t_n = sequence.dim(0);
  const std::size_t hidden = w.hidden;

  std::vector<Tensor> steps(t_n);
  for (std::size_t t = 0; t < t_n; ++t) steps[t] = row(tape, sequence, t);

  Tensor final_state;
  for (std::size_t layer = 0; layer < w.layers.size(); ++layer) {
    if (input_dropout > 0.0 && training) {
      for (Tensor& s : steps) {
        s = dropout(tape, s, input_dropout, training, *rng);
      }
    }
    auto [h_fwd, last_fwd] =
        run_direction(tape, steps, w.layers[layer].forward, hidden, false);
    auto [h_bwd, last_bwd] =
        run_direction(tape, steps, w.layers[layer].backward, hidden, true);
    for (std::size_t t = 0; t < t_n; ++t) {
      steps[t] = concat(tape, h_fwd[t], h_bwd[t]);
    }
    final_state = concat(tape, last_fwd, last_bwd);
  }

  BiLstmOut out;
  out.outputs = stack_rows(tape, steps);
  out.final = final_state;
  return out;
}

BiLstmWeights init_bilstm(Rng& rng, std::size_t layers, std::size_t input_dim,
                          std::size_t hidden) {
  BiLstmWeights w;
  w.hidden = hidden;
  std::size_t d = input_dim;
  for (std::size_t l = 0; l < layers; ++l) {
    LstmLayerWeights layer;
    for (LstmDirWeights* dir : {&layer.forward, &layer.backward}) {
      dir->w_ih = glorot_uniform(rng, {4 * hidden, d}, d, 4 * hidden);
      dir->w_hh = glorot_uniform(rng, {4 * hidden, hidden}, hidden, 4 * hidden);
      dir->b = Tensor({4 * hidden});
      for (std::size_t i = hidden; i < 2 * hidden; ++i) dir->b[i] = 1.0;
    }
    w.layers.push_back(std::move(layer));
    d = 2 * hidden;
  }
  return w;
}

}  // namespace cranhl::nn
