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

#include <functional>
#include <memory>
#include <optional>

#include "cranhl/model/checkpoint.hpp"
#include "cranhl/nn/adam.hpp"

namespace cranhl::model {

struct TrainExample {
  std::string track_id;
  std::shared_ptr<const audio::Mat> input;  // normalized model input
  std::vector<double> target;               // probability vector, length G
  std::vector<std::size_t> genre_ids;       // true genres, for recall metrics
};

struct TrainOptions {
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  nn::AdamOptions adam{};
  std::uint64_t seed = 1;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean per-example loss seen during the updates
  std::optional<double> val_loss;
  std::optional<double> val_recall3;
};

// Mini-batch Adam training with per-epoch validation and best-validation
// checkpointing. Gradients accumulate over a batch in example order and are
// averaged before the update, so runs are bit-reproducible for a fixed seed.
class Trainer {
 public:
  Trainer(CranModel& model, std::vector<TrainExample> train,
          std::vector<TrainExample> val, TrainOptions opts);

  EpochStats run_epoch();

  // Mean cross-entropy in inference mode (dropout off).
  double mean_loss(std::span<const TrainExample> examples);

  // Fraction of examples whose true genre set intersects the top-k
  // predictions.
  double recall_at_k(std::span<const TrainExample> examples, std::size_t k);

  const std::vector<EpochStats>& history() const { return history_; }
  const std::vector<TrainExample>& train_set() const { return train_; }
  const std::vector<TrainExample>& val_set() const { return val_; }

  // Checkpoint at the best validation loss seen so far; when there is no
  // validation split, the current parameters.
  Checkpoint best_checkpoint() const;

  nlohmann::json metrics_json() const;

 private:
  CranModel& model_;
  std::vector<TrainExample> train_;
  std::vector<TrainExample> val_;
  TrainOptions opts_;
  Rng shuffle_rng_;
  std::vector<EpochStats> history_;
  std::optional<Checkpoint> best_;
  double best_val_loss_ = 0.0;
  std::size_t best_epoch_ = 0;
};

// Runs `opts.epochs` epochs and returns the retained checkpoint, with
// per-epoch stats in its training metadata. `on_epoch` (optional) observes
// each epoch's stats.
Checkpoint train(CranModel& model, std::vector<TrainExample> train_set,
                 std::vector<TrainExample> val_set, const TrainOptions& opts,
                 const std::function<void(const EpochStats&)>& on_epoch = {});

// Inference-mode metrics over a fixed example set.
double mean_loss(CranModel& model, std::span<const TrainExample> examples);
double recall_at_k(CranModel& model, std::span<const TrainExample> examples,
                   std::size_t k);

}  // namespace cranhl::model
