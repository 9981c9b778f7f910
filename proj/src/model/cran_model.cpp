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

#include "cranhl/model/cran_model.hpp"

#include <algorithm>
#include <numeric>

namespace cranhl::model {

using nn::Tensor;

nn::Tensor input_tensor(const audio::Mat& x) {
  return Tensor({x.rows, x.cols}, x.v);
}

CranModel::CranModel(const ModelConfig& config)
    : cfg_(config), dropout_rng_(Rng(config.seed).derive("dropout")) {
  cfg_.validate();
  Rng init = Rng(cfg_.seed).derive("init");

  // Conv stack. Block 0 sees the mel channels, later blocks the filters.
  std::size_t in_ch = cfg_.input_channels;
  for (std::size_t b = 0; b < cfg_.conv_blocks; ++b) {
    for (std::size_t c = 0; c < cfg_.convs_per_block; ++c) {
      const std::string base =
          "conv/b" + std::to_string(b) + "/c" + std::to_string(c);
      add_param(base + "/w",
                nn::glorot_uniform(init, {cfg_.filters, in_ch, cfg_.kernel},
                                   in_ch * cfg_.kernel,
                                   cfg_.filters * cfg_.kernel));
      add_param(base + "/b", Tensor({cfg_.filters}));
      in_ch = cfg_.filters;
    }
  }

  if (cfg_.has_recurrence()) {
    nn::BiLstmWeights w =
        nn::init_bilstm(init, cfg_.lstm_layers, cfg_.filters, cfg_.lstm_hidden);
    for (std::size_t l = 0; l < w.layers.size(); ++l) {
      for (auto [dir, tag] :
           {std::pair{&w.layers[l].forward, "fwd"},
            std::pair{&w.layers[l].backward, "bwd"}}) {
        const std::string base =
            "lstm/l" + std::to_string(l) + "/" + tag;
        add_param(base + "/w_ih", dir->w_ih);
        add_param(base + "/w_hh", dir->w_hh);
        add_param(base + "/b", dir->b);
      }
    }
  } else {
    // Mean-pooled slots are projected up to the summary width so the same
    // FC stack serves all variants.
    add_param("proj/w",
              nn::glorot_uniform(init, {cfg_.summary_dim(), cfg_.filters},
                                 cfg_.filters, cfg_.summary_dim()));
    add_param("proj/b", Tensor({cfg_.summary_dim()}));
  }

  std::size_t d = cfg_.summary_dim();
  for (std::size_t i = 0; i < cfg_.fc_sizes.size(); ++i) {
    const std::size_t m = cfg_.fc_sizes[i];
    const std::string base = "fc/" + std::to_string(i);
    add_param(base + "/w", nn::glorot_uniform(init, {m, d}, d, m));
    add_param(base + "/b", Tensor({m}));
    d = m;
  }

  if (cfg_.has_attention()) {
    const std::size_t ad = cfg_.attention_dim;
    add_param("attn/ts_w", nn::glorot_uniform(init, {ad, cfg_.filters},
                                              cfg_.filters, ad));
    add_param("attn/a_w", nn::glorot_uniform(init, {1, ad}, ad, 1));
    Tensor p({ad, ad});
    for (std::size_t i = 0; i < ad; ++i) p.at(i, i) = 1.0;  // identity start
    add_param("attn/p", p);
  }

  add_param("out/w", nn::glorot_uniform(init, {cfg_.genres, d}, d, cfg_.genres));
  add_param("out/b", Tensor({cfg_.genres}));
}

nn::Parameter* CranModel::add_param(const std::string& name, Tensor value) {
  auto p = std::make_unique<nn::Parameter>(name, std::move(value));
  param_index_[name] = params_.size();
  params_.push_back(std::move(p));
  return params_.back().get();
}

std::vector<nn::Parameter*> CranModel::parameters() {
  std::vector<nn::Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const nn::Parameter*> CranModel::parameters() const {
  std::vector<const nn::Parameter*> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

nn::Parameter* CranModel::find_parameter(const std::string& name) {
  auto it = param_index_.find(name);
  return it == param_index_.end() ? nullptr : params_[it->second].get();
}

nn::BiLstmWeights CranModel::lstm_view() {
  nn::BiLstmWeights w;
  w.hidden = cfg_.lstm_hidden;
  for (std::size_t l = 0; l < cfg_.lstm_layers; ++l) {
    const std::string base = "lstm/l" + std::to_string(l) + "/";
    nn::LstmLayerWeights layer;
    layer.forward = {find_parameter(base + "fwd/w_ih")->value,
                     find_parameter(base + "fwd/w_hh")->value,
                     find_parameter(base + "fwd/b")->value};
    layer.backward = {find_parameter(base + "bwd/w_ih")->value,
                      find_parameter(base + "bwd/w_hh")->value,
                      find_parameter(base + "bwd/b")->value};
    w.layers.push_back(std::move(layer));
  }
  return w;
}

nn::Tensor CranModel::feature_extract(nn::Tape* tape, const Tensor& x) {
  if (x.rank() != 2 || x.dim(0) != cfg_.input_channels ||
      x.dim(1) != cfg_.input_frames) {
    throw InvalidShapeError(
        "feature_extract: expected [" + std::to_string(cfg_.input_channels) +
        " x " + std::to_string(cfg_.input_frames) + "], got " +
        nn::shape_str(x.shape()));
  }
  Tensor h = x;
  for (std::size_t b = 0; b < cfg_.conv_blocks; ++b) {
    for (std::size_t c = 0; c < cfg_.convs_per_block; ++c) {
      const std::string base =
          "conv/b" + std::to_string(b) + "/c" + std::to_string(c);
      h = nn::conv1d(tape, h, find_parameter(base + "/w")->value,
                     find_parameter(base + "/b")->value);
      h = nn::elu(tape, h);
    }
    h = nn::maxpool1d(tape, h, cfg_.pool);
  }
  return nn::transpose(tape, h);  // [T x filters]
}

nn::Tensor CranModel::fc_stack(nn::Tape* tape, const Tensor& input,
                               bool training) {
  Tensor h = input;
  for (std::size_t i = 0; i < cfg_.fc_sizes.size(); ++i) {
    const std::string base = "fc/" + std::to_string(i);
    h = nn::dense(tape, h, find_parameter(base + "/w")->value,
                  find_parameter(base + "/b")->value);
    if (i + 1 < cfg_.fc_sizes.size()) h = nn::elu(tape, h);
    h = nn::dropout(tape, h, cfg_.dropout_fc, training, dropout_rng_);
  }
  return h;
}

nn::Tensor CranModel::summary(nn::Tape* tape, const Tensor& slots,
                              bool training) {
  if (cfg_.has_recurrence()) {
    nn::BiLstmWeights w = lstm_view();
    nn::BiLstmOut out = nn::bilstm(tape, slots, w, cfg_.dropout_recurrent,
                                   training, &dropout_rng_);
    return out.final;
  }
  Tensor pooled = nn::seq_mean(tape, slots);
  return nn::dense(tape, pooled, find_parameter("proj/w")->value,
                   find_parameter("proj/b")->value);
}

CranModel::AttendOut CranModel::attend(nn::Tape* tape, const Tensor& slots,
                                       const Tensor& fc_out) {
  Tensor g = nn::tanh_op(tape, nn::seq_linear(tape, slots,
                                              find_parameter("attn/ts_w")->value));
  Tensor f = nn::tanh_op(tape, fc_out);
  Tensor v = nn::rowwise_mul(tape, g, f);  // similarity vectors, one per slot

  Tensor scores = nn::seq_linear(tape, v, find_parameter("attn/a_w")->value);
  scores = scores.reshaped({v.dim(0)});
  scores = nn::tanh_op(tape, scores);

  AttendOut out;
  out.alpha = nn::softmax(tape, scores);
  Tensor pooled = nn::weighted_sum(tape, out.alpha, v);
  out.z = nn::dense(tape, pooled, find_parameter("attn/p")->value, Tensor{});
  out.m = nn::elementwise_mul(tape, nn::tanh_op(tape, out.z), f);
  return out;
}

CranModel::Forward CranModel::head_forward(nn::Tape* tape, const Tensor& slots,
                                           bool training) {
  Tensor u_prime = summary(tape, slots, training);
  Tensor fc_out = fc_stack(tape, u_prime, training);

  Forward fwd;
  fwd.summary = u_prime;
  if (cfg_.has_attention()) {
    AttendOut att = attend(tape, slots, fc_out);
    fwd.attention = att.alpha;
    fwd.pooled = att.z;
    fwd.context = att.m;
    fwd.logits = nn::dense(tape, att.m, find_parameter("out/w")->value,
                           find_parameter("out/b")->value);
  } else {
    Tensor cls = nn::tanh_op(tape, fc_out);
    fwd.logits = nn::dense(tape, cls, find_parameter("out/w")->value,
                           find_parameter("out/b")->value);
  }
  fwd.genre_probs = nn::softmax(tape, fwd.logits);
  return fwd;
}

CranModel::Forward CranModel::forward(const audio::Mat& x, bool training,
                                      nn::Tape* tape) {
  Tensor input = input_tensor(x);
  Tensor slots = feature_extract(tape, input);
  return head_forward(tape, slots, training);
}

CranModel::Forward CranModel::forward(const audio::MelSpectrogram& mel,
                                      bool training, nn::Tape* tape) {
  return forward(mel.values, training, tape);
}

nn::Tensor CranModel::loss(nn::Tape* tape, const Forward& fwd,
                           std::span<const double> target) {
  return nn::softmax_cross_entropy(tape, fwd.logits, target).loss;
}

std::vector<std::size_t> CranModel::topk_from_probs(const Tensor& probs,
                                                    std::size_t k) {
  const std::size_t g = probs.size();
  if (k > g) {
    throw InvalidInputError("predict_topk: k exceeds the genre count");
  }
  std::vector<std::size_t> idx(g);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return probs[a] > probs[b];
  });
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> CranModel::predict_topk(const audio::Mat& x,
                                                 std::size_t k) {
  Forward fwd = forward(x, /*training=*/false, nullptr);
  return topk_from_probs(fwd.genre_probs, k);
}

}  // namespace cranhl::model
