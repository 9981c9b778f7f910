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

#include "cranhl/model/trainer.hpp"

#include <cmath>

namespace cranhl::model {

Trainer::Trainer(CranModel& model, std::vector<TrainExample> train,
                 std::vector<TrainExample> val, TrainOptions opts)
    : model_(model),
      train_(std::move(train)),
      val_(std::move(val)),
      opts_(opts),
      shuffle_rng_(Rng(opts.seed).derive("shuffle")) {
  if (train_.empty()) {
    throw InvalidInputError("trainer: empty training set");
  }
  if (opts_.batch_size == 0) {
    throw InvalidConfigError("trainer: batch size must be positive");
  }
  // Reset the dropout stream so a run is reproducible no matter what the
  // model did before.
  model_.reseed_dropout(Rng(opts.seed).derive("dropout").next_u64());
}

EpochStats Trainer::run_epoch() {
  std::vector<std::size_t> order(train_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_rng_.shuffle(order);

  auto params = model_.parameters();
  double loss_sum = 0.0;
  std::size_t done = 0;
  const std::size_t epoch = history_.size();

  try {
    while (done < order.size()) {
      const std::size_t batch =
          std::min(opts_.batch_size, order.size() - done);
      for (std::size_t b = 0; b < batch; ++b) {
        const TrainExample& ex = train_[order[done + b]];
        nn::Tape tape;
        CranModel::Forward fwd =
            model_.forward(*ex.input, /*training=*/true, &tape);
        nn::Tensor loss = model_.loss(&tape, fwd, ex.target);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw TrainingDivergedError(
              "training diverged: non-finite loss at epoch " +
              std::to_string(epoch) + ", track " + ex.track_id);
        }
        loss_sum += value;
        tape.backward(loss);
      }
      const double inv = 1.0 / static_cast<double>(batch);
      for (nn::Parameter* p : params) {
        for (double& g : p->grad()) g *= inv;
      }
      nn::adam_step(params, opts_.adam);
      done += batch;
    }
  } catch (const ContractViolation& e) {
    throw TrainingDivergedError(std::string("training diverged: ") + e.what());
  }

  EpochStats stats;
  stats.epoch = epoch;
  stats.train_loss = loss_sum / static_cast<double>(train_.size());
  if (!val_.empty()) {
    stats.val_loss = mean_loss(val_);
    stats.val_recall3 =
        recall_at_k(val_, std::min<std::size_t>(3, model_.config().genres));
    if (!best_ || *stats.val_loss < best_val_loss_) {
      best_val_loss_ = *stats.val_loss;
      best_epoch_ = epoch;
      best_ = make_checkpoint(model_);
    }
  }
  history_.push_back(stats);
  return stats;
}

double mean_loss(CranModel& model, std::span<const TrainExample> examples) {
  double sum = 0.0;
  for (const TrainExample& ex : examples) {
    CranModel::Forward fwd =
        model.forward(*ex.input, /*training=*/false, nullptr);
    sum += nn::softmax_cross_entropy(nullptr, fwd.logits, ex.target)
               .loss.item();
  }
  return sum / static_cast<double>(examples.size());
}

double recall_at_k(CranModel& model, std::span<const TrainExample> examples,
                   std::size_t k) {
  std::size_t hits = 0;
  for (const TrainExample& ex : examples) {
    CranModel::Forward fwd =
        model.forward(*ex.input, /*training=*/false, nullptr);
    const auto top = CranModel::topk_from_probs(fwd.genre_probs, k);
    for (std::size_t g : ex.genre_ids) {
      if (std::find(top.begin(), top.end(), g) != top.end()) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

double Trainer::mean_loss(std::span<const TrainExample> examples) {
  return model::mean_loss(model_, examples);
}

double Trainer::recall_at_k(std::span<const TrainExample> examples,
                            std::size_t k) {
  return model::recall_at_k(model_, examples, k);
}

nlohmann::json Trainer::metrics_json() const {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochStats& s : history_) {
    nlohmann::json row{{"epoch", s.epoch}, {"train_loss", s.train_loss}};
    if (s.val_loss) row["val_loss"] = *s.val_loss;
    if (s.val_recall3) row["val_recall3"] = *s.val_recall3;
    epochs.push_back(std::move(row));
  }
  return nlohmann::json{{"epochs", epochs},
                        {"epochs_run", history_.size()},
                        {"best_epoch", best_ ? best_epoch_ : 0},
                        {"seed", opts_.seed}};
}

Checkpoint Trainer::best_checkpoint() const {
  if (best_) {
    Checkpoint cp = *best_;
    cp.training = metrics_json();
    return cp;
  }
  return make_checkpoint(model_, metrics_json());
}

Checkpoint train(CranModel& model, std::vector<TrainExample> train_set,
                 std::vector<TrainExample> val_set, const TrainOptions& opts,
                 const std::function<void(const EpochStats&)>& on_epoch) {
  Trainer trainer(model, std::move(train_set), std::move(val_set), opts);
  for (std::size_t e = 0; e < opts.epochs; ++e) {
    EpochStats stats = trainer.run_epoch();
    if (on_epoch) on_epoch(stats);
  }
  return trainer.best_checkpoint();
}

}  // namespace cranhl::model
