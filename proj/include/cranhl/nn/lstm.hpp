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

#include <vector>

#include "cranhl/nn/ops.hpp"
#include "cranhl/nn/param.hpp"

namespace cranhl::nn {

// One direction of one LSTM layer. Gate order in the stacked [4H x ...]
// matrices is input, forget, cell candidate, output.
struct LstmDirWeights {
  Tensor w_ih;  // [4H x D]
  Tensor w_hh;  // [4H x H]
  Tensor b;     // [4H]
};

struct LstmLayerWeights {
  LstmDirWeights forward;
  LstmDirWeights backward;
};

struct BiLstmWeights {
  std::vector<LstmLayerWeights> layers;
  std::size_t hidden = 0;
};

struct BiLstmOut {
  Tensor outputs;  // [T x 2H], both directions concatenated per step
  Tensor final;    // [2H]: each direction's state after its full sweep
};

// Standard LSTM recurrence (sigmoid gates, tanh candidate) run forward and
// backward over time, stacked `layers` deep; layer l >= 1 consumes layer
// l-1's per-step outputs. When training, inverted dropout at `input_dropout`
// is applied to every step's input of every layer.
//
// Built entirely from tape primitives, so gradients come for free.
BiLstmOut bilstm(Tape* tape, const Tensor& sequence, const BiLstmWeights& w,
                 double input_dropout = 0.0, bool training = false,
                 Rng* rng = nullptr);

// Weight construction: glorot for both matrices, zero bias except the
// forget gate block which starts at 1.
BiLstmWeights init_bilstm(Rng& rng, std::size_t layers, std::size_t input_dim,
                          std::size_t hidden);

}  // namespace cranhl::nn
