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

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cranhl/audio/sample_buffer.hpp"
#include "cranhl/model/config.hpp"
#include "cranhl/nn/gradcheck.hpp"
#include "cranhl/nn/lstm.hpp"
#include "cranhl/nn/ops.hpp"

namespace cranhl::model {

// Genre classifier over mel-spectrograms whose attention weights double as
// the highlight signal. The variant flag switches architecture only; input
// handling is identical across variants.
class CranModel {
 public:
  explicit CranModel(const ModelConfig& config);

  const ModelConfig& config() const { return cfg_; }

  struct Forward {
    nn::Tensor logits;       // [G]
    nn::Tensor genre_probs;  // [G], sums to 1
    nn::Tensor attention;    // [T]; undefined for variants without attention
    nn::Tensor context;      // m [d]; undefined without attention
    nn::Tensor pooled;       // z [d]; undefined without attention
    nn::Tensor summary;      // u' [2H]: recurrent final state or projected
                             // mean pool
  };

  // Full pass over a [input_channels x input_frames] grid. Callers are
  // responsible for any input normalization. A null tape runs inference.
  Forward forward(const audio::Mat& x, bool training, nn::Tape* tape);
  Forward forward(const audio::MelSpectrogram& mel, bool training,
                  nn::Tape* tape);

  // Conv/pool stack producing the slot sequence U [T x filters].
  nn::Tensor feature_extract(nn::Tape* tape, const nn::Tensor& x);

  // Everything after the conv stack. Exposed so tests can feed a modified
  // slot sequence (e.g. permuted in time).
  Forward head_forward(nn::Tape* tape, const nn::Tensor& slots, bool training);

  struct AttendOut {
    nn::Tensor alpha;  // [T], softmax-normalized
    nn::Tensor z;      // [d]
    nn::Tensor m;      // [d]
  };

  // Attention block: similarity vectors from the slot sequence and the fc
  // summary, softmax attention, weighted pooling, gated context vector.
  // `fc_out` is the FC-stack output (pre-tanh).
  AttendOut attend(nn::Tape* tape, const nn::Tensor& slots,
                   const nn::Tensor& fc_out);

  // Categorical cross-entropy of the forward's logits against a probability
  // vector (multi-genre targets arrive as normalized multi-hot).
  nn::Tensor loss(nn::Tape* tape, const Forward& fwd,
                  std::span<const double> target);

  // Indices of the k largest genre probabilities, descending, lower index
  // first on ties.
  std::vector<std::size_t> predict_topk(const audio::Mat& x, std::size_t k);
  static std::vector<std::size_t> topk_from_probs(const nn::Tensor& probs,
                                                  std::size_t k);

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  nn::Parameter* find_parameter(const std::string& name);

  // Dropout stream; reseeded by the trainer for reproducible runs.
  void reseed_dropout(std::uint64_t seed) { dropout_rng_ = Rng(seed); }

 private:
  nn::Parameter* add_param(const std::string& name, nn::Tensor value);
  nn::Tensor fc_stack(nn::Tape* tape, const nn::Tensor& input, bool training);
  nn::Tensor summary(nn::Tape* tape, const nn::Tensor& slots, bool training);
  nn::BiLstmWeights lstm_view();

  ModelConfig cfg_;
  std::vector<std::unique_ptr<nn::Parameter>> params_;
  std::map<std::string, std::size_t> param_index_;
  Rng dropout_rng_;
};

// Converts a mel grid to the model input tensor (no gradient tracking).
nn::Tensor input_tensor(const audio::Mat& x);

}  // namespace cranhl::model
