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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cranhl::model {

// Architecture grid: the full model and its ablations.
//   CRAN: conv -> BiLSTM -> attention -> classifier
//   CAN:  conv -> mean pool -> attention -> classifier (no recurrence)
//   CRN:  conv -> BiLSTM -> classifier (no attention)
//   CNN:  conv -> mean pool -> classifier (neither)
enum class Variant { kCran, kCan, kCrn, kCnn };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct ModelConfig {
  Variant variant = Variant::kCran;
  std::size_t conv_blocks = 4;
  std::size_t convs_per_block = 2;
  std::size_t filters = 64;
  std::size_t kernel = 3;
  std::size_t pool = 2;
  std::size_t lstm_layers = 2;
  std::size_t lstm_hidden = 512;
  std::vector<std::size_t> fc_sizes{500, 300};
  std::size_t attention_dim = 300;
  std::size_t genres = 10;
  double dropout_recurrent = 0.2;
  double dropout_fc = 0.5;
  std::uint64_t seed = 0;
  std::size_t input_channels = 128;
  std::size_t input_frames = 4000;

  bool has_recurrence() const {
    return variant == Variant::kCran || variant == Variant::kCrn;
  }
  bool has_attention() const {
    return variant == Variant::kCran || variant == Variant::kCan;
  }

  // Sequence length after the conv/pool stack.
  std::size_t time_slots() const;

  // Width of the recurrent summary u' (and of the mean-pool projection).
  std::size_t summary_dim() const { return 2 * lstm_hidden; }

  // Throws InvalidConfigError when the geometry is inconsistent.
  void validate() const;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);

  // Small geometry used by gradient checks and desk-scale experiments:
  // 2 blocks, 8 filters, 8 input channels, 64 frames (T = 16), H = 8,
  // fc = [16, 8], d = 8, 3 genres, dropout off.
  static ModelConfig tiny(Variant v);
};

bool operator==(const ModelConfig& a, const ModelConfig& b);

}  // namespace cranhl::model
