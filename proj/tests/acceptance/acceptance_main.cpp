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

// Acceptance suite: ten end-to-end criteria, one pass/fail line each.
// Exit status is zero only when every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "cranhl/audio/wav.hpp"
#include "cranhl/data/genres.hpp"
#include "cranhl/eval/report.hpp"
#include "cranhl/nn/gradcheck.hpp"
#include "cranhl/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cranhl;
using Clock = std::chrono::steady_clock;

namespace {

// ------------------------------------------------------------- harness ---

struct Criterion {
  int id;
  std::string name;
  std::function<std::string()> run;  // returns detail text; throws on failure
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// -------------------------------------------------------------- helpers ---

fs::path work_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "cranhl_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

audio::Mat random_input(Rng& rng, std::size_t rows, std::size_t cols) {
  audio::Mat m(rows, cols);
  for (double& v : m.v) v = rng.uniform(0.0, 1.0);
  return m;
}

// Small model geometry shared by the desk-scale training criteria:
// 4 conv blocks of 8 filters (T = 250), 1 BiLSTM layer of 16, fc [32, 16],
// dropout off for deterministic convergence.
model::ModelConfig small_config(model::Variant v, std::uint64_t seed) {
  model::ModelConfig cfg;
  cfg.variant = v;
  cfg.filters = 8;
  cfg.lstm_layers = 1;
  cfg.lstm_hidden = 16;
  cfg.fc_sizes = {32, 16};
  cfg.attention_dim = 16;
  cfg.dropout_recurrent = 0.0;
  cfg.dropout_fc = 0.0;
  cfg.seed = seed;
  return cfg;
}

struct Corpus {
  data::SynthCorpus synth;
  std::map<std::string, audio::MelSpectrogram> mels;
  std::map<std::string, double> durations;
  std::map<std::string, eval::GroundTruth> ground_truth;

  std::vector<model::TrainExample> examples(
      std::optional<data::Split> split) const {
    const auto splits = data::split_by_rank(synth.manifest);
    std::vector<model::TrainExample> out;
    for (const auto& r : synth.manifest.records) {
      if (split && splits.at(r.track_id) != *split) continue;
      out.push_back(pipeline::make_example(r, mels.at(r.track_id),
                                           data::kGenreCount, true));
    }
    return out;
  }
};

Corpus build_corpus(const std::string& name, std::size_t tracks,
                    std::size_t genres, std::uint64_t seed) {
  data::SynthOptions opts;
  opts.n_tracks = tracks;
  opts.n_genres = genres;
  opts.seed = seed;
  opts.out_dir = work_root() / name;
  Corpus corpus;
  corpus.synth = data::synth_corpus(opts);
  for (const auto& r : corpus.synth.manifest.records) {
    corpus.mels[r.track_id] = pipeline::preprocess_file(r.audio_path);
    corpus.durations[r.track_id] =
        audio::read_wav_info(r.audio_path).duration_s();
  }
  for (const auto& g : corpus.synth.ground_truth) {
    corpus.ground_truth[g.track_id] = g;
  }
  return corpus;
}

// Corpora shared across criteria 6-8, built lazily.
const Corpus& corpus_overfit() {
  static Corpus c = build_corpus("corpus_overfit", 20, 4, 1001);
  return c;
}
const Corpus& corpus_highlight() {
  static Corpus c = build_corpus("corpus_highlight", 50, 5, 2002);
  return c;
}

double extractor_recall(const Corpus& corpus,
                        const std::vector<highlight::HighlightRecord>& recs) {
  const auto report =
      eval::evaluate(corpus.synth.manifest, corpus.ground_truth, recs);
  require(report.extractors.size() == 1, "expected one extractor in report");
  return report.extractors[0].overall.recall_rate;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CRANHL_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  require(is.good(), "missing pipeline artifact: " + p.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// ------------------------------------------------------------- criteria ---

// 1. Finite differences across every coordinate of the full tiny CRAN.
std::string c1_gradient_correctness() {
  const auto t0 = Clock::now();
  model::ModelConfig cfg = model::ModelConfig::tiny(model::Variant::kCran);
  model::CranModel net(cfg);
  Rng rng(271);
  const audio::Mat x = random_input(rng, cfg.input_channels, cfg.input_frames);
  std::vector<double> target(cfg.genres, 0.0);
  target[1] = 1.0;

  auto loss = [&](nn::Tape* tape) {
    auto fwd = net.forward(x, /*training=*/false, tape);
    return net.loss(tape, fwd, target);
  };
  nn::FdCheckOptions opts;
  opts.max_coords_per_param = 0;  // every coordinate
  const auto result = nn::finite_difference_check(loss, net.parameters(), opts);
  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  require(result.max_rel_err < 1e-4,
          "max relative error " + fmt(result.max_rel_err) + " at " +
              result.worst_param);
  require(elapsed < 60.0, "runtime " + fmt(elapsed) + "s exceeds 60s");
  return "max_rel_err=" + fmt(result.max_rel_err) + " over " +
         std::to_string(result.coords_checked) + " coords in " + fmt(elapsed) +
         "s";
}

// 2. Attention mass is exactly normalized for both attention variants.
std::string c2_attention_normalization() {
  double worst = 0.0;
  for (auto variant : {model::Variant::kCran, model::Variant::kCan}) {
    model::CranModel net(model::ModelConfig::tiny(variant));
    Rng rng(272);
    for (int trial = 0; trial < 100; ++trial) {
      const audio::Mat x = random_input(rng, 8, 64);
      const auto fwd = net.forward(x, false, nullptr);
      double sum = 0.0;
      for (std::size_t t = 0; t < fwd.attention.size(); ++t) {
        sum += fwd.attention[t];
      }
      worst = std::max(worst, std::abs(sum - 1.0));
      require(std::abs(sum - 1.0) <= 1e-9,
              model::variant_name(variant) + " trial " +
                  std::to_string(trial) + ": |sum-1| = " + fmt(sum - 1.0));
    }
  }
  return "200 forwards, worst |sum(alpha)-1| = " + fmt(worst);
}

// 3. Every input of at least one second becomes a 128x4000 grid.
std::string c3_shape_contract() {
  Rng rng(273);
  struct Case {
    double seconds;
    double rate;
  };
  const std::vector<Case> cases{
      {1.0, audio::kCanonicalRate},    {2.5, audio::kCanonicalRate},
      {30.0, audio::kCanonicalRate},   {59.5, audio::kCanonicalRate},
      {120.0, audio::kCanonicalRate},  {200.0, audio::kCanonicalRate},
      {239.5, audio::kCanonicalRate},  {audio::kCanonicalSeconds,
                                        audio::kCanonicalRate},
      {245.0, audio::kCanonicalRate},  {300.0, audio::kCanonicalRate},
      {400.0, audio::kCanonicalRate},  {5.0, 44100.0},
      {8.0, 16744.0},                  {rng.uniform(1.0, 400.0),
                                        audio::kCanonicalRate},
  };
  for (const Case& c : cases) {
    audio::SampleBuffer buffer;
    buffer.sample_rate = c.rate;
    const auto n = static_cast<std::size_t>(c.seconds * c.rate);
    buffer.samples.resize(n);
    for (double& s : buffer.samples) s = rng.uniform(-0.5, 0.5);
    if (buffer.sample_rate != audio::kCanonicalRate) {
      buffer = audio::resample(buffer, audio::kCanonicalRate);
    }
    const audio::MelSpectrogram mel = audio::mel_spectrogram(buffer);
    require(mel.values.rows == 128 && mel.values.cols == 4000,
            "shape violated at " + fmt(c.seconds) + "s/" + fmt(c.rate) + "Hz");
    for (double v : mel.values.v) {
      require(v >= 0.0 && std::isfinite(v), "bad energy value");
    }
  }
  return std::to_string(cases.size()) +
         " durations in [1s, 400s], both canonicalization branches";
}

// 4. The windowed score equals an independent O(N*S) evaluation.
std::string c4_window_score_oracle() {
  Rng rng(274);
  const std::size_t n = 4000, s = 490;
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    std::vector<double> e_tilde(n), e_mean(n);
    for (double& v : e_tilde) v = rng.uniform(0.0, 1.0);
    for (double& v : e_mean) v = rng.uniform(0.0, 1.0);
    const auto impl = highlight::highlight_scores(e_tilde, e_mean, s, 0.5);

    // Brute force: fresh double loop per window start.
    require(impl.size() == n - s + 1, "window score length");
    for (std::size_t start = 0; start < impl.size(); ++start) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s; ++k) acc += e_tilde[start + k];
      double diff = 0.0;
      if (start >= 2) {
        const double d1 = e_mean[start] - e_mean[start - 1];
        const double d0 = e_mean[start - 1] - e_mean[start - 2];
        diff = d1 + (d1 - d0);
      }
      const double ref = 0.5 * acc + 0.5 * diff;
      worst = std::max(worst, std::abs(impl[start] - ref));
      require(std::abs(impl[start] - ref) <= 1e-12,
              "pair " + std::to_string(pair) + " start " +
                  std::to_string(start) + ": |diff| = " +
                  fmt(std::abs(impl[start] - ref)));
    }
  }
  return "50 pairs, N=4000, S=490, worst |diff| = " + fmt(worst);
}

// 5. Interval metrics agree with direct arithmetic, strict boundary included.
std::string c5_metric_identities() {
  // Exact boundary: overlap equals half the span length -> no recall.
  {
    const eval::GroundTruth gt{"b", 10.0, 25.0};
    const highlight::HighlightSpan h{10.0, 30.0, 0.0};
    require(eval::overlap(gt, h) == 15.0, "boundary overlap");
    require(eval::recall_bit(gt, h) == 0, "strict inequality violated");
  }
  Rng rng(275);
  for (int trial = 0; trial < 1000; ++trial) {
    const double g0 = rng.uniform(0.0, 250.0);
    const double g1 = g0 + rng.uniform(0.05, 90.0);
    const double h0 = rng.uniform(0.0, 250.0);
    const double hd = rng.uniform(0.05, 90.0);
    const eval::GroundTruth gt{"t", g0, g1};
    const highlight::HighlightSpan h{h0, hd, 0.0};

    const double lo = std::max(g0, h0);
    const double hi = std::min(g1, h0 + hd);
    const double direct = std::max(0.0, hi - lo);
    require(eval::overlap(gt, h) == direct, "overlap mismatch");
    require(eval::overlap(gt, h) >= 0.0, "negative overlap");
    require(eval::recall_bit(gt, h) == (direct > 0.5 * hd ? 1 : 0),
            "recall bit mismatch");
  }
  return "1000 random interval cases + exact half-overlap boundary";
}

// 6. The small model memorizes a 20-track corpus within 200 epochs.
std::string c6_overfit_sanity() {
  const auto t0 = Clock::now();
  const Corpus& corpus = corpus_overfit();
  auto examples = corpus.examples(std::nullopt);
  require(examples.size() == 20, "corpus size");

  model::CranModel net(small_config(model::Variant::kCran, 7));
  model::TrainOptions opts;
  opts.batch_size = 16;
  opts.adam.lr = 0.01;
  opts.seed = 7;
  model::Trainer trainer(net, examples, {}, opts);

  for (int epoch = 0; epoch < 200; ++epoch) {
    trainer.run_epoch();
    const double loss = trainer.mean_loss(trainer.train_set());
    if (loss < 0.05) {
      const double recall1 = model::recall_at_k(net, trainer.train_set(), 1);
      if (recall1 == 1.0) {
        const double elapsed =
            std::chrono::duration<double>(Clock::now() - t0).count();
        require(elapsed < 600.0, "runtime " + fmt(elapsed) + "s");
        return "loss " + fmt(loss) + ", recall@1 1.0 at epoch " +
               std::to_string(epoch) + " (" + fmt(elapsed) + "s)";
      }
    }
  }
  throw Failure("gate (loss < 0.05 and recall@1 == 1) not met in 200 epochs");
}

// 7. Planted choruses: the energy baseline recovers them, and fusing
//    attention on top must not break a solvable case.
std::string c7_highlight_recovery() {
  const Corpus& corpus = corpus_highlight();

  std::vector<highlight::HighlightRecord> energy;
  for (const auto& r : corpus.synth.manifest.records) {
    energy.push_back(pipeline::extract_energy(r.track_id,
                                              corpus.mels.at(r.track_id),
                                              corpus.durations.at(r.track_id),
                                              0.5));
  }
  const double energy_recall = extractor_recall(corpus, energy);
  require(energy_recall >= 0.9,
          "energy recall " + fmt(energy_recall) + " < 0.9");

  model::CranModel net(small_config(model::Variant::kCran, 21));
  model::TrainOptions opts;
  opts.epochs = 8;
  opts.batch_size = 16;
  opts.adam.lr = 0.01;
  opts.seed = 21;
  model::train(net, corpus.examples(data::Split::kTrain), {}, opts);

  std::vector<highlight::HighlightRecord> fused;
  for (const auto& r : corpus.synth.manifest.records) {
    fused.push_back(pipeline::extract_fused(
        net, r.track_id, corpus.mels.at(r.track_id),
        corpus.durations.at(r.track_id), 0.1, 0.5));
  }
  const double fused_recall = extractor_recall(corpus, fused);
  require(fused_recall >= energy_recall - 0.05,
          "fused recall " + fmt(fused_recall) + " fell more than 0.05 below " +
              fmt(energy_recall));
  return "energy recall " + fmt(energy_recall) + ", fused recall " +
         fmt(fused_recall);
}

// 8. Averaged over three seeds, CRAN's validation recall@3 is at least CNN's.
std::string c8_ablation_ordering() {
  const Corpus& corpus = corpus_highlight();
  auto train_set = corpus.examples(data::Split::kTrain);
  auto val_set = corpus.examples(data::Split::kVal);
  require(!val_set.empty(), "empty validation split");

  auto mean_recall3 = [&](model::Variant variant) {
    double total = 0.0;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      model::CranModel net(small_config(variant, seed));
      model::TrainOptions opts;
      opts.epochs = 10;
      opts.batch_size = 16;
      opts.adam.lr = 0.01;
      opts.seed = seed;
      model::train(net, train_set, {}, opts);
      total += model::recall_at_k(net, val_set, 3);
    }
    return total / 3.0;
  };
  const double cran = mean_recall3(model::Variant::kCran);
  const double cnn = mean_recall3(model::Variant::kCnn);
  require(cran >= cnn - 1e-12, "CRAN " + fmt(cran) + " < CNN " + fmt(cnn));
  return "mean val recall@3 over 3 seeds: CRAN " + fmt(cran) + " vs CNN " +
         fmt(cnn) + " (val n=" + std::to_string(val_set.size()) + ")";
}

// 9. Time-slot order matters to CRAN but not to CAN's pooled summary.
std::string c9_permutation() {
  Rng rng(279);
  const audio::Mat x = random_input(rng, 8, 64);
  std::vector<std::size_t> perm(16);
  for (std::size_t i = 0; i < 16; ++i) perm[i] = (i * 5 + 2) % 16;
  auto permute_rows = [&](const nn::Tensor& u) {
    nn::Tensor out({u.dim(0), u.dim(1)});
    for (std::size_t t = 0; t < u.dim(0); ++t) {
      for (std::size_t c = 0; c < u.dim(1); ++c) {
        out.at(t, c) = u.at(perm[t], c);
      }
    }
    return out;
  };

  model::CranModel cran(model::ModelConfig::tiny(model::Variant::kCran));
  nn::Tensor u = cran.feature_extract(nullptr, model::input_tensor(x));
  const auto base = cran.head_forward(nullptr, u, false);
  const auto shuffled = cran.head_forward(nullptr, permute_rows(u), false);
  double max_delta = 0.0;
  for (std::size_t i = 0; i < base.logits.size(); ++i) {
    max_delta =
        std::max(max_delta, std::abs(base.logits[i] - shuffled.logits[i]));
  }
  require(max_delta > 1e-6, "CRAN logits unchanged under permutation");

  model::CranModel can(model::ModelConfig::tiny(model::Variant::kCan));
  nn::Tensor u2 = can.feature_extract(nullptr, model::input_tensor(x));
  const auto base2 = can.head_forward(nullptr, u2, false);
  const auto shuffled2 = can.head_forward(nullptr, permute_rows(u2), false);
  for (std::size_t i = 0; i < base2.summary.size(); ++i) {
    require(base2.summary[i] == shuffled2.summary[i],
            "CAN pooled summary not bit-identical at dim " +
                std::to_string(i));
  }
  return "CRAN max |delta logit| = " + fmt(max_delta) +
         "; CAN summary bit-identical";
}

// 10. The full pipeline, run twice through the CLI with one seed, produces
//     byte-identical artifacts.
std::string c10_reproducibility() {
  auto run_pipeline = [&](const std::string& name) {
    const fs::path dir = work_root() / name;
    fs::create_directories(dir);
    const std::string corpus = (dir / "corpus").string();
    const std::string cache = (dir / "cache").string();
    const std::string manifest = corpus + "/manifest.csv";
    require(run_cli("synth --n 8 --genres 3 --seed 77 --out " + corpus +
                    " --min-duration 60 --max-duration 90") == 0,
            "synth failed");
    require(run_cli("preprocess --manifest " + manifest + " --cache-dir " +
                    cache + " --jobs 2") == 0,
            "preprocess failed");
    require(run_cli("train --manifest " + manifest + " --cache-dir " + cache +
                    " --out " + (dir / "model.ckpt").string() +
                    " --metrics-log " + (dir / "metrics.json").string() +
                    " --preset small --variant cran --epochs 2 --batch 8 "
                    "--seed 5 --train-on-all") == 0,
            "train failed");
    require(run_cli("extract --checkpoint " + (dir / "model.ckpt").string() +
                    " --manifest " + manifest + " --cache-dir " + cache +
                    " --out " + (dir / "fused.jsonl").string()) == 0,
            "fused extract failed");
    require(run_cli("extract --manifest " + manifest + " --cache-dir " +
                    cache + " --extractor energy --out " +
                    (dir / "energy.jsonl").string()) == 0,
            "energy extract failed");
    require(run_cli("extract --manifest " + manifest + " --extractor f1m "
                    "--out " + (dir / "f1m.jsonl").string()) == 0,
            "f1m extract failed");
    // One records file with all three extractors.
    std::ofstream combined(dir / "combined.jsonl", std::ios::trunc);
    for (const char* part : {"fused.jsonl", "energy.jsonl", "f1m.jsonl"}) {
      combined << file_bytes(dir / part);
    }
    combined.close();
    require(run_cli("eval --records " + (dir / "combined.jsonl").string() +
                    " --ground-truth " + corpus + "/ground_truth.csv" +
                    " --manifest " + manifest + " --report " +
                    (dir / "report.json").string() + " --checkpoint " +
                    (dir / "model.ckpt").string() + " --cache-dir " + cache) ==
                0,
            "eval failed");
    return dir;
  };

  const fs::path a = run_pipeline("pipeline_run1");
  const fs::path b = run_pipeline("pipeline_run2");
  const std::vector<std::string> artifacts{
      "report.json",   "fused.jsonl",  "energy.jsonl",
      "f1m.jsonl",     "metrics.json", "cache/synth0000.mels"};
  for (const std::string& artifact : artifacts) {
    require(file_bytes(a / artifact) == file_bytes(b / artifact),
            artifact + " differs between runs");
  }
  return std::to_string(artifacts.size()) +
         " artifacts byte-identical across two seeded runs";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gradient-correctness", c1_gradient_correctness},
      {2, "attention-normalization", c2_attention_normalization},
      {3, "shape-contract", c3_shape_contract},
      {4, "window-score-oracle", c4_window_score_oracle},
      {5, "metric-identities", c5_metric_identities},
      {6, "overfit-sanity", c6_overfit_sanity},
      {7, "highlight-recovery", c7_highlight_recovery},
      {8, "ablation-ordering", c8_ablation_ordering},
      {9, "permutation-sensitivity", c9_permutation},
      {10, "pipeline-reproducibility", c10_reproducibility},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    std::string verdict, detail;
    try {
      detail = c.run();
      verdict = "PASS";
    } catch (const std::exception& e) {
      detail = e.what();
      verdict = "FAIL";
      ++failures;
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] %2d %-26s %s (%.1fs)\n", verdict.c_str(), c.id,
                c.name.c_str(), detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
