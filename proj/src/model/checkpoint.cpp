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

#include "cranhl/model/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "cranhl/binio.hpp"
#include "cranhl/rng.hpp"

namespace cranhl::model {

namespace {

constexpr char kMagic[4] = {'C', 'R', 'A', 'N'};

std::string config_hash_hex(const ModelConfig& config) {
  const std::string canonical = config.to_json().dump();
  std::ostringstream os;
  os << std::hex << fnv1a64(canonical);
  return os.str();
}

}  // namespace

const nn::Tensor* Checkpoint::find(const std::string& name) const {
  for (const NamedTensor& nt : tensors) {
    if (nt.name == name) return &nt.tensor;
  }
  return nullptr;
}

Checkpoint make_checkpoint(const CranModel& model, nlohmann::json training) {
  Checkpoint cp;
  cp.config = model.config();
  cp.training = std::move(training);

  const auto params = model.parameters();
  nn::Tensor steps({params.size()});
  for (std::size_t i = 0; i < params.size(); ++i) {
    const nn::Parameter* p = params[i];
    nn::Tensor value = p->value.clone();
    value.set_needs_grad(false);
    cp.tensors.push_back({"param/" + p->name, std::move(value)});

    auto moment = [&](const std::vector<double>& m) {
      return m.empty() ? nn::Tensor(p->value.shape())
                       : nn::Tensor(p->value.shape(), m);
    };
    cp.tensors.push_back({"adam_m/" + p->name, moment(p->adam_m)});
    cp.tensors.push_back({"adam_v/" + p->name, moment(p->adam_v)});
    steps[i] = static_cast<double>(p->step_count);
  }
  cp.tensors.push_back({"meta/step_counts", std::move(steps)});
  return cp;
}

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path) {
  nlohmann::json header{{"format_version", kCheckpointVersion},
                        {"model", checkpoint.config.to_json()},
                        {"config_hash", config_hash_hex(checkpoint.config)},
                        {"training", checkpoint.training}};
  const std::string json = header.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("checkpoint: cannot write: " + path.string());
  binio::write_bytes(os, kMagic, 4);
  binio::write_u32(os, kCheckpointVersion);
  binio::write_u32(os, static_cast<std::uint32_t>(json.size()));
  binio::write_bytes(os, json.data(), json.size());
  binio::write_u32(os, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const Checkpoint::NamedTensor& nt : checkpoint.tensors) {
    binio::write_u32(os, static_cast<std::uint32_t>(nt.name.size()));
    binio::write_bytes(os, nt.name.data(), nt.name.size());
    binio::write_u32(os, static_cast<std::uint32_t>(nt.tensor.rank()));
    for (std::size_t d : nt.tensor.shape()) {
      binio::write_u32(os, static_cast<std::uint32_t>(d));
    }
    for (std::size_t i = 0; i < nt.tensor.size(); ++i) {
      binio::write_f64(os, nt.tensor[i]);
    }
  }
  if (!os) throw IoError("checkpoint: write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("checkpoint: cannot open: " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::string_view(magic, 4) != "CRAN") {
    throw CorruptFileError("checkpoint: bad magic: " + path.string());
  }
  const std::uint32_t version = binio::read_u32(is, "version");
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint: unsupported version " +
                       std::to_string(version));
  }
  const std::uint32_t json_len = binio::read_u32(is, "json length");
  const std::string json_text = binio::read_string(is, json_len, "header json");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(std::string("checkpoint: header json: ") + e.what());
  }

  Checkpoint cp;
  try {
    cp.config = ModelConfig::from_json(header.at("model"));
    cp.training = header.value("training", nlohmann::json::object());
    const auto stored_hash = header.at("config_hash").get<std::string>();
    if (stored_hash != config_hash_hex(cp.config)) {
      throw VersionError("checkpoint: config hash mismatch: " + path.string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFileError(std::string("checkpoint: header: ") + e.what());
  }

  const std::uint32_t count = binio::read_u32(is, "tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = binio::read_u32(is, "tensor name length");
    std::string name = binio::read_string(is, name_len, "tensor name");
    const std::uint32_t rank = binio::read_u32(is, "tensor rank");
    if (rank > 8) throw CorruptFileError("checkpoint: implausible rank");
    nn::Shape shape(rank);
    std::size_t total = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      shape[r] = binio::read_u32(is, "tensor dim");
      total *= shape[r];
    }
    std::vector<double> values(total);
    for (double& v : values) v = binio::read_f64(is, "tensor values");
    cp.tensors.push_back({std::move(name), nn::Tensor(shape, std::move(values))});
  }
  return cp;
}

std::unique_ptr<CranModel> restore_model(const Checkpoint& checkpoint) {
  auto model = std::make_unique<CranModel>(checkpoint.config);
  auto params = model->parameters();

  const nn::Tensor* steps = checkpoint.find("meta/step_counts");
  if (!steps || steps->size() != params.size()) {
    throw CorruptFileError("checkpoint: missing or misaligned step counts");
  }
  std::size_t expected = params.size() * 3 + 1;
  if (checkpoint.tensors.size() != expected) {
    throw CorruptFileError("checkpoint: tensor count " +
                           std::to_string(checkpoint.tensors.size()) +
                           " does not match the architecture (expected " +
                           std::to_string(expected) + ")");
  }

  for (std::size_t i = 0; i < params.size(); ++i) {
    nn::Parameter* p = params[i];
    const nn::Tensor* value = checkpoint.find("param/" + p->name);
    const nn::Tensor* m = checkpoint.find("adam_m/" + p->name);
    const nn::Tensor* v = checkpoint.find("adam_v/" + p->name);
    if (!value || !m || !v) {
      throw CorruptFileError("checkpoint: missing tensors for parameter '" +
                             p->name + "'");
    }
    if (value->shape() != p->value.shape()) {
      throw CorruptFileError("checkpoint: shape mismatch for '" + p->name +
                             "': file " + nn::shape_str(value->shape()) +
                             " vs model " + nn::shape_str(p->value.shape()));
    }
    std::copy(value->data(), value->data() + value->size(), p->value.data());
    p->adam_m.assign(m->data(), m->data() + m->size());
    p->adam_v.assign(v->data(), v->data() + v->size());
    p->step_count = static_cast<std::int64_t>((*steps)[i]);
  }
  return model;
}

}  // namespace cranhl::model
