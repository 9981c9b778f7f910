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

#include "cranhl/model/config.hpp"

#include "cranhl/error.hpp"

namespace cranhl::model {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kCran: return "CRAN";
    case Variant::kCan: return "CAN";
    case Variant::kCrn: return "CRN";
    case Variant::kCnn: return "CNN";
  }
  throw InvalidConfigError("unknown variant");
}

Variant variant_from_name(const std::string& name) {
  std::string up;
  for (char c : name) up.push_back(static_cast<char>(std::toupper(c)));
  if (up == "CRAN") return Variant::kCran;
  if (up == "CAN") return Variant::kCan;
  if (up == "CRN") return Variant::kCrn;
  if (up == "CNN") return Variant::kCnn;
  throw InvalidConfigError("unknown model variant '" + name +
                           "' (expected cran, can, crn, or cnn)");
}

std::size_t ModelConfig::time_slots() const {
  std::size_t t = input_frames;
  for (std::size_t b = 0; b < conv_blocks; ++b) {
    if (t % pool != 0) {
      throw InvalidConfigError("config: input_frames not divisible by pool^" +
                               std::to_string(conv_blocks));
    }
    t /= pool;
  }
  return t;
}

void ModelConfig::validate() const {
  if (filters == 0 || conv_blocks == 0 || convs_per_block == 0) {
    throw InvalidConfigError("config: conv stack must be non-trivial");
  }
  if (kernel % 2 == 0) throw InvalidConfigError("config: kernel must be odd");
  if (fc_sizes.empty()) throw InvalidConfigError("config: fc stack empty");
  if (attention_dim != fc_sizes.back()) {
    throw InvalidConfigError(
        "config: attention_dim must equal the last fc size (required by the "
        "elementwise product forming the context vector)");
  }
  if (genres < 1) throw InvalidConfigError("config: need at least one genre");
  if (has_recurrence() && (lstm_layers == 0 || lstm_hidden == 0)) {
    throw InvalidConfigError("config: recurrent variant needs lstm sizes");
  }
  if (dropout_recurrent < 0 || dropout_recurrent >= 1 || dropout_fc < 0 ||
      dropout_fc >= 1) {
    throw InvalidConfigError("config: dropout rates must be in [0, 1)");
  }
  time_slots();  // throws when pooling does not divide the frame count
}

nlohmann::json ModelConfig::to_json() const {
  return nlohmann::json{{"variant", variant_name(variant)},
                        {"conv_blocks", conv_blocks},
                        {"convs_per_block", convs_per_block},
                        {"filters", filters},
                        {"kernel", kernel},
                        {"pool", pool},
                        {"lstm_layers", lstm_layers},
                        {"lstm_hidden", lstm_hidden},
                        {"fc_sizes", fc_sizes},
                        {"attention_dim", attention_dim},
                        {"genres", genres},
                        {"dropout_recurrent", dropout_recurrent},
                        {"dropout_fc", dropout_fc},
                        {"seed", seed},
                        {"input_channels", input_channels},
                        {"input_frames", input_frames}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.variant = variant_from_name(j.at("variant").get<std::string>());
    c.conv_blocks = j.at("conv_blocks").get<std::size_t>();
    c.convs_per_block = j.at("convs_per_block").get<std::size_t>();
    c.filters = j.at("filters").get<std::size_t>();
    c.kernel = j.at("kernel").get<std::size_t>();
    c.pool = j.at("pool").get<std::size_t>();
    c.lstm_layers = j.at("lstm_layers").get<std::size_t>();
    c.lstm_hidden = j.at("lstm_hidden").get<std::size_t>();
    c.fc_sizes = j.at("fc_sizes").get<std::vector<std::size_t>>();
    c.attention_dim = j.at("attention_dim").get<std::size_t>();
    c.genres = j.at("genres").get<std::size_t>();
    c.dropout_recurrent = j.at("dropout_recurrent").get<double>();
    c.dropout_fc = j.at("dropout_fc").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.input_channels = j.at("input_channels").get<std::size_t>();
    c.input_frames = j.at("input_frames").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(std::string("config json: ") + e.what());
  }
  c.validate();
  return c;
}

ModelConfig ModelConfig::tiny(Variant v) {
  ModelConfig c;
  c.variant = v;
  c.conv_blocks = 2;
  c.convs_per_block = 2;
  c.filters = 8;
  c.kernel = 3;
  c.pool = 2;
  c.lstm_layers = 2;
  c.lstm_hidden = 8;
  c.fc_sizes = {16, 8};
  c.attention_dim = 8;
  c.genres = 3;
  c.dropout_recurrent = 0.0;
  c.dropout_fc = 0.0;
  c.seed = 7;
  c.input_channels = 8;
  c.input_frames = 64;
  return c;
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.to_json() == b.to_json();
}

}  // namespace cranhl::model
