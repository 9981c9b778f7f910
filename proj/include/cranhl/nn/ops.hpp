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

#include "cranhl/nn/tape.hpp"
#include "cranhl/nn/tensor.hpp"
#include "cranhl/rng.hpp"

namespace cranhl::nn {

// Differentiable primitives. Every op validates shapes (InvalidShapeError on
// mismatch, no silent broadcasting), computes the forward value, checks it
// is finite, and records its backward closure when a tape is supplied and
// any input needs gradients. A null tape runs pure inference.

// Same-padded 1-D convolution over [C_in x T] with odd kernel size.
// out[c,t] = bias[c] + sum_{i,k} filters[c,i,k] * in[i, t+k-K/2]
Tensor conv1d(Tape* tape, const Tensor& input, const Tensor& filters,
              const Tensor& bias);

// Non-overlapping max pooling along time; T must divide by pool. Gradients
// route to the first maximal element of each window.
Tensor maxpool1d(Tape* tape, const Tensor& input, std::size_t pool);

// Affine map: weight [M x D] * input [D] + bias [M]. Pass an undefined bias
// tensor for a pure linear map.
Tensor dense(Tape* tape, const Tensor& input, const Tensor& weight,
             const Tensor& bias);

// Row-wise linear map: input [T x D] * weight^T -> [T x M] (no bias).
Tensor seq_linear(Tape* tape, const Tensor& input, const Tensor& weight);

enum class Pointwise { kElu, kTanh, kSigmoid };

// Elementwise nonlinearity; elu uses alpha = 1 with derivative 1 at 0.
Tensor pointwise(Tape* tape, Pointwise op, const Tensor& input);
Tensor elu(Tape* tape, const Tensor& input);
Tensor tanh_op(Tape* tape, const Tensor& input);
Tensor sigmoid(Tape* tape, const Tensor& input);

Tensor add(Tape* tape, const Tensor& a, const Tensor& b);

// Hadamard product with product-rule gradients.
Tensor elementwise_mul(Tape* tape, const Tensor& a, const Tensor& b);

// Numerically stable softmax over a vector (max subtraction).
Tensor softmax(Tape* tape, const Tensor& logits);

struct CrossEntropyOut {
  Tensor loss;   // scalar
  Tensor probs;  // [G]
};

// Fused softmax + categorical cross-entropy against a fixed probability
// vector; d(loss)/d(logits) = probs - target. The target must be
// non-negative and sum to 1 within 1e-9.
CrossEntropyOut softmax_cross_entropy(Tape* tape, const Tensor& logits,
                                      std::span<const double> target);

// Inverted dropout: zero with probability `rate`, scale survivors by
// 1/(1-rate). Identity when not training or rate == 0.
Tensor dropout(Tape* tape, const Tensor& input, double rate, bool training,
               Rng& rng);

// Concatenation of two vectors.
Tensor concat(Tape* tape, const Tensor& a, const Tensor& b);

// Row r of a [T x D] tensor as a [D] vector.
Tensor row(Tape* tape, const Tensor& input, std::size_t r);

// Stacks T equal-length vectors into [T x D].
Tensor stack_rows(Tape* tape, std::span<const Tensor> rows);

// 2-D transpose.
Tensor transpose(Tape* tape, const Tensor& input);

// Column means of [T x D] -> [D]. The reduction sums each column's values
// in sorted order, so the result is exactly invariant under any permutation
// of the rows.
Tensor seq_mean(Tape* tape, const Tensor& input);

// sum_t alpha[t] * rows[t] for alpha [T], rows [T x D] -> [D].
Tensor weighted_sum(Tape* tape, const Tensor& alpha, const Tensor& rows);

// rows [T x D] scaled elementwise by v [D] broadcast across rows.
Tensor rowwise_mul(Tape* tape, const Tensor& rows, const Tensor& v);

// Softmax values without tape involvement (shared by softmax and the fused
// cross-entropy so both produce bit-identical probabilities).
void softmax_values(std::span<const double> logits, std::span<double> out);

}  // namespace cranhl::nn
