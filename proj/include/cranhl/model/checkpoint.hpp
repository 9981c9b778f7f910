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

#include <filesystem>

#include "cranhl/model/cran_model.hpp"

namespace cranhl::model {

// Serialized model state. On disk:
//   magic "CRAN", version u32,
//   json_len u32 + canonical JSON {config, training metadata, config hash},
//   tensor_count u32,
//   per tensor: name_len u32 + name, rank u32, dims u32 each, f64 values LE.
//
// Tensor names: "param/<name>", "adam_m/<name>", "adam_v/<name>" per
// parameter plus "meta/step_counts" aligned with parameter order. The JSON
// embeds an FNV-1a hash of the canonical config object; load recomputes it
// and raises VersionError on mismatch.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  struct NamedTensor {
    std::string name;
    nn::Tensor tensor;
  };

  ModelConfig config;
  std::vector<NamedTensor> tensors;
  nlohmann::json training;  // epoch, loss history, ...

  const nn::Tensor* find(const std::string& name) const;
};

// Deep-copies the model's parameters and optimizer state.
Checkpoint make_checkpoint(const CranModel& model,
                           nlohmann::json training = nlohmann::json::object());

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path);

Checkpoint load_checkpoint(const std::filesystem::path& path);

// Builds a model from the checkpoint's config and installs its parameters
// and optimizer state. Any structural mismatch raises CorruptFileError.
std::unique_ptr<CranModel> restore_model(const Checkpoint& checkpoint);

}  // namespace cranhl::model
