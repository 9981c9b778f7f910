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

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cranhl/audio/wav.hpp"
#include "cranhl/data/genres.hpp"
#include "cranhl/eval/attention_analysis.hpp"
#include "cranhl/eval/report.hpp"
#include "cranhl/parallel.hpp"
#include "cranhl/pipeline.hpp"

namespace {

using namespace cranhl;

std::filesystem::path resolve_cache_dir(std::string flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CRAN_CACHE_DIR"); env && *env) {
    return env;
  }
  throw InvalidConfigError(
      "no cache directory: pass --cache-dir or set CRAN_CACHE_DIR");
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    h = fnv1a64(buf, static_cast<std::size_t>(is.gcount()), h);
    if (!is) break;
  }
  return h;
}

int report_failures(const std::vector<std::optional<std::string>>& errors,
                    const data::Manifest& manifest) {
  int failures = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) {
      std::cerr << "FAILED " << manifest.records[i].track_id << ": "
                << *errors[i] << '\n';
      ++failures;
    }
  }
  return failures;
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
  data::SynthOptions opts;
};

int cmd_synth(const SynthArgs& args) {
  data::SynthCorpus corpus = data::synth_corpus(args.opts);
  std::cout << "wrote " << corpus.manifest.records.size() << " tracks under "
            << args.opts.out_dir.string() << '\n'
            << "manifest: " << corpus.manifest_path.string() << '\n'
            << "manifest (newrelease ranking): "
            << corpus.manifest_newrelease_path.string() << '\n'
            << "ground truth: " << corpus.ground_truth_path.string() << '\n';
  return 0;
}

// ----------------------------------------------------------- preprocess ---

struct PreprocessArgs {
  std::string manifest_path;
  std::string cache_dir_flag;
  std::size_t jobs = 1;
};

int cmd_preprocess(const PreprocessArgs& args) {
  const std::filesystem::path cache_dir = resolve_cache_dir(args.cache_dir_flag);
  std::filesystem::create_directories(cache_dir);
  const data::Manifest manifest = data::load_manifest(args.manifest_path);

  const std::filesystem::path index_path = cache_dir / "cache-index.json";
  nlohmann::json index = nlohmann::json::object();
  if (std::filesystem::exists(index_path)) {
    std::ifstream is(index_path);
    try {
      is >> index;
    } catch (const nlohmann::json::exception&) {
      index = nlohmann::json::object();  // stale index; rebuild
    }
  }

  const std::size_t n = manifest.records.size();
  std::vector<std::string> hashes(n);
  std::vector<bool> skipped(n, false);

  auto errors = parallel_try(n, args.jobs, [&](std::size_t i) {
    const data::TrackRecord& r = manifest.records[i];
    std::ostringstream hex;
    hex << std::hex << hash_file(r.audio_path);
    hashes[i] = hex.str();
    const auto out = pipeline::cache_path(cache_dir, r.track_id);
    if (index.contains(r.track_id) &&
        index[r.track_id].value("source_hash", "") == hashes[i] &&
        std::filesystem::exists(out)) {
      skipped[i] = true;
      return;
    }
    audio::save_mel_cache(out, pipeline::preprocess_file(r.audio_path));
  });

  std::size_t done = 0, skip = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) continue;
    const data::TrackRecord& r = manifest.records[i];
    index[r.track_id] = {{"source_hash", hashes[i]},
                         {"file", r.track_id + ".mels"}};
    skipped[i] ? ++skip : ++done;
  }
  std::ofstream os(index_path, std::ios::trunc);
  os << index.dump(2) << '\n';

  const int failures = report_failures(errors, manifest);
  std::cout << "preprocessed " << done << ", skipped " << skip << ", failed "
            << failures << '\n';
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- train ---

struct TrainArgs {
  std::string manifest_path;
  std::string cache_dir_flag;
  std::string out_path = "model.ckpt";
  std::string metrics_path;
  std::string variant = "cran";
  std::string preset = "paper";
  model::TrainOptions train;
  std::uint64_t seed = 1;
  bool normalize = true;
  bool train_on_all = false;
  // Architecture overrides; SIZE_MAX means "keep preset value".
  std::size_t filters = SIZE_MAX, lstm_layers = SIZE_MAX,
              lstm_hidden = SIZE_MAX, conv_blocks = SIZE_MAX;
  std::vector<std::size_t> fc_sizes;
  double dropout_recurrent = -1.0, dropout_fc = -1.0;
};

model::ModelConfig build_config(const TrainArgs& args) {
  model::ModelConfig cfg;
  if (args.preset == "small") {
    cfg.filters = 8;
    cfg.lstm_layers = 1;
    cfg.lstm_hidden = 16;
    cfg.fc_sizes = {32, 16};
    cfg.attention_dim = 16;
  } else if (args.preset != "paper") {
    throw InvalidConfigError("unknown preset '" + args.preset + "'");
  }
  cfg.variant = model::variant_from_name(args.variant);
  cfg.seed = args.seed;
  if (args.filters != SIZE_MAX) cfg.filters = args.filters;
  if (args.conv_blocks != SIZE_MAX) cfg.conv_blocks = args.conv_blocks;
  if (args.lstm_layers != SIZE_MAX) cfg.lstm_layers = args.lstm_layers;
  if (args.lstm_hidden != SIZE_MAX) cfg.lstm_hidden = args.lstm_hidden;
  if (!args.fc_sizes.empty()) {
    cfg.fc_sizes = args.fc_sizes;
    cfg.attention_dim = args.fc_sizes.back();
  }
  if (args.dropout_recurrent >= 0) cfg.dropout_recurrent = args.dropout_recurrent;
  if (args.dropout_fc >= 0) cfg.dropout_fc = args.dropout_fc;
  cfg.validate();
  return cfg;
}

int cmd_train(TrainArgs args) {
  model::ModelConfig cfg = build_config(args);
  model::CranModel net(cfg);
  args.train.seed = args.seed;
  model::Checkpoint checkpoint;
  if (args.train.epochs == 0) {
    // Initialized, untrained checkpoint; no caches needed.
    checkpoint = model::make_checkpoint(
        net, nlohmann::json{{"epochs_run", 0}, {"seed", args.seed}});
  } else {
    const std::filesystem::path cache_dir =
        resolve_cache_dir(args.cache_dir_flag);
    const data::Manifest manifest =
        data::load_manifest(args.manifest_path, /*require_audio=*/false);
    std::vector<model::TrainExample> train_set = pipeline::load_examples(
        manifest, cache_dir,
        args.train_on_all ? std::nullopt
                          : std::optional<data::Split>(data::Split::kTrain),
        cfg.genres, args.normalize);
    std::vector<model::TrainExample> val_set =
        args.train_on_all
            ? std::vector<model::TrainExample>{}
            : pipeline::load_examples(manifest, cache_dir, data::Split::kVal,
                                      cfg.genres, args.normalize);
    checkpoint = model::train(
        net, std::move(train_set), std::move(val_set), args.train,
        [](const model::EpochStats& s) {
          std::cout << "epoch " << s.epoch << " train_loss " << s.train_loss;
          if (s.val_loss) std::cout << " val_loss " << *s.val_loss;
          if (s.val_recall3) std::cout << " val_recall3 " << *s.val_recall3;
          std::cout << '\n';
        });
  }
  model::save_checkpoint(checkpoint, args.out_path);
  std::cout << "checkpoint: " << args.out_path << " (variant "
            << model::variant_name(cfg.variant) << ")\n";
  if (!args.metrics_path.empty()) {
    std::ofstream os(args.metrics_path, std::ios::trunc);
    os << checkpoint.training.dump(2) << '\n';
  }
  return 0;
}

// -------------------------------------------------------------- extract ---

struct ExtractArgs {
  std::string checkpoint_path;
  std::string manifest_path;
  std::string cache_dir_flag;
  std::string out_path = "highlights.jsonl";
  std::string csv_path;
  std::string extractor = "model";
  std::string dump_attention_dir;
  double gamma = highlight::kDefaultGamma;
  double beta = highlight::kDefaultBeta;
  double duration_s = highlight::kHighlightSeconds;
  bool normalize = true;
  std::size_t jobs = 1;
};

int cmd_extract(const ExtractArgs& args) {
  const data::Manifest manifest = data::load_manifest(args.manifest_path);
  const bool needs_model = args.extractor == "model";
  const bool needs_cache = args.extractor != "f1m";
  std::filesystem::path cache_dir;
  if (needs_cache) cache_dir = resolve_cache_dir(args.cache_dir_flag);

  std::unique_ptr<model::CranModel> net;
  if (needs_model) {
    if (args.checkpoint_path.empty()) {
      throw InvalidConfigError("extractor 'model' needs --checkpoint");
    }
    net = model::restore_model(model::load_checkpoint(args.checkpoint_path));
    if (!net->config().has_attention()) {
      throw InvalidInputError(
          "checkpoint variant " + model::variant_name(net->config().variant) +
          " has no attention scores to fuse; use --extractor energy");
    }
  }
  if (!args.dump_attention_dir.empty()) {
    if (!needs_model) {
      throw InvalidConfigError("--dump-attention needs the model extractor");
    }
    std::filesystem::create_directories(args.dump_attention_dir);
  }

  const std::size_t n = manifest.records.size();
  std::vector<highlight::HighlightRecord> records(n);
  // Model forwards share the net, so they stay sequential; inference is
  // read-only but the cheap per-track stages dominate only without a model.
  const std::size_t jobs = needs_model ? 1 : args.jobs;

  auto errors = parallel_try(n, jobs, [&](std::size_t i) {
    const data::TrackRecord& r = manifest.records[i];
    const double duration = audio::read_wav_info(r.audio_path).duration_s();
    if (args.extractor == "f1m") {
      records[i] = pipeline::extract_f1m(r.track_id, duration);
      return;
    }
    const audio::MelSpectrogram mel =
        audio::load_mel_cache(pipeline::cache_path(cache_dir, r.track_id));
    if (args.extractor == "energy") {
      records[i] = pipeline::extract_energy(r.track_id, mel, duration,
                                            args.beta, args.normalize,
                                            args.duration_s);
      return;
    }
    records[i] =
        pipeline::extract_fused(*net, r.track_id, mel, duration, args.gamma,
                                args.beta, args.normalize, args.duration_s);
    if (!args.dump_attention_dir.empty()) {
      const audio::MelSpectrogram prepared =
          args.normalize ? audio::normalize_max(mel) : mel;
      const std::vector<double> alpha =
          pipeline::attention_profile(*net, prepared.values);
      std::ofstream os(std::filesystem::path(args.dump_attention_dir) /
                       (r.track_id + "_attention.csv"));
      os << "slot,alpha\n";
      for (std::size_t t = 0; t < alpha.size(); ++t) {
        os << t << ',' << nlohmann::json(alpha[t]).dump() << '\n';
      }
    }
  });

  std::vector<highlight::HighlightRecord> ok;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) ok.push_back(records[i]);
  }
  highlight::write_records_jsonl(args.out_path, ok);
  if (!args.csv_path.empty()) highlight::write_records_csv(args.csv_path, ok);

  const int failures = report_failures(errors, manifest);
  std::cout << "extracted " << ok.size() << " highlights ("
            << (needs_model ? "fused" : args.extractor) << ") -> "
            << args.out_path << '\n';
  return failures == 0 ? 0 : 1;
}

// ----------------------------------------------------------------- eval ---

struct EvalArgs {
  std::string records_path;
  std::string ground_truth_path;
  std::string manifest_path;
  std::string report_path = "report.json";
  std::string table_path;
  std::string checkpoint_path;
  std::string cache_dir_flag;
  std::string attention_stats_dir;
  bool normalize = true;
};

int cmd_eval(const EvalArgs& args) {
  const data::Manifest manifest =
      data::load_manifest(args.manifest_path, /*require_audio=*/false);
  const auto ground_truth = eval::load_ground_truth(args.ground_truth_path);
  const auto records = highlight::read_records_jsonl(args.records_path);

  std::unique_ptr<model::CranModel> net;
  std::filesystem::path cache_dir;
  std::optional<eval::ClassifierEval> classification;
  if (!args.checkpoint_path.empty()) {
    net = model::restore_model(model::load_checkpoint(args.checkpoint_path));
    cache_dir = resolve_cache_dir(args.cache_dir_flag);
    const auto test = pipeline::load_examples(manifest, cache_dir,
                                              data::Split::kTest,
                                              net->config().genres,
                                              args.normalize);
    if (!test.empty()) {
      eval::ClassifierEval ce;
      ce.ranking_name = manifest.ranking_name;
      ce.recall_at_3 = model::recall_at_k(
          *net, test, std::min<std::size_t>(3, net->config().genres));
      ce.n_tracks = test.size();
      classification = ce;
    }
  }

  eval::EvalReport report =
      eval::evaluate(manifest, ground_truth, records, classification);
  {
    std::ofstream os(args.report_path, std::ios::trunc);
    if (!os) throw IoError("cannot write report: " + args.report_path);
    os << report.to_json().dump(2) << '\n';
  }
  const std::string table = report.to_table();
  std::cout << table;
  if (!args.table_path.empty()) {
    std::ofstream os(args.table_path, std::ios::trunc);
    os << table;
  }
  if (!report.skipped_track_ids.empty()) {
    std::cerr << "warning: " << report.skipped_track_ids.size()
              << " track(s) skipped (missing ground truth or manifest row)\n";
  }

  if (!args.attention_stats_dir.empty()) {
    if (!net) {
      throw InvalidConfigError("--attention-stats needs --checkpoint");
    }
    if (!net->config().has_attention()) {
      throw InvalidInputError("checkpoint variant has no attention profile");
    }
    std::filesystem::create_directories(args.attention_stats_dir);
    std::map<std::size_t, std::vector<std::vector<double>>> by_genre;
    std::vector<eval::CorrelationRow> corr;
    for (const data::TrackRecord& r : manifest.records) {
      const audio::MelSpectrogram mel = audio::normalize_max(
          audio::load_mel_cache(pipeline::cache_path(cache_dir, r.track_id)));
      const std::vector<double> alpha =
          pipeline::attention_profile(*net, mel.values);
      for (std::size_t g : r.genre_ids) by_genre[g].push_back(alpha);
      const std::vector<double> frames =
          highlight::upsample_attention(alpha, mel.values.cols);
      corr.push_back(
          {r.track_id, r.genre_ids,
           eval::pearson(frames, audio::mean_energy(mel))});
    }
    const std::filesystem::path dir = args.attention_stats_dir;
    eval::write_attention_stats_csv(dir / "attention_stats.csv",
                                    eval::attention_stats(by_genre));
    eval::write_correlation_csv(dir / "attention_energy_corr.csv",
                                dir / "attention_energy_corr_by_genre.csv",
                                corr);
  }
  std::cout << "report: " << args.report_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"music highlight extraction pipeline"};
  app.require_subcommand(1);

  SynthArgs synth;
  std::string synth_out;
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a seeded synthetic corpus");
  synth_cmd->add_option("--n", synth.opts.n_tracks, "number of tracks")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--genres", synth.opts.n_genres, "genres used")
      ->check(CLI::Range(std::size_t{1}, data::kGenreCount));
  synth_cmd->add_option("--seed", synth.opts.seed, "corpus seed");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--sample-rate", synth.opts.sample_rate, "wav rate");
  synth_cmd->add_option("--min-duration", synth.opts.min_duration_s,
                        "shortest track (s)");
  synth_cmd->add_option("--max-duration", synth.opts.max_duration_s,
                        "longest track (s)");
  synth_cmd->add_option("--multi-frac", synth.opts.multi_genre_fraction,
                        "fraction of two-genre tracks")
      ->check(CLI::Range(0.0, 1.0));

  PreprocessArgs pre;
  auto* pre_cmd =
      app.add_subcommand("preprocess", "cache mel-spectrograms for a manifest");
  pre_cmd->add_option("--manifest", pre.manifest_path, "manifest csv")
      ->required();
  pre_cmd->add_option("--cache-dir", pre.cache_dir_flag,
                      "cache directory (or CRAN_CACHE_DIR)");
  pre_cmd->add_option("--jobs", pre.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "train a genre classifier");
  tr_cmd->add_option("--manifest", tr.manifest_path, "manifest csv")
      ->required();
  tr_cmd->add_option("--cache-dir", tr.cache_dir_flag, "cache directory");
  tr_cmd->add_option("--out", tr.out_path, "checkpoint output path");
  tr_cmd->add_option("--metrics-log", tr.metrics_path, "metrics json path");
  tr_cmd->add_option("--variant", tr.variant, "cran|can|crn|cnn");
  tr_cmd->add_option("--preset", tr.preset, "paper|small");
  tr_cmd->add_option("--epochs", tr.train.epochs, "training epochs");
  tr_cmd->add_option("--batch", tr.train.batch_size, "mini-batch size")
      ->check(CLI::PositiveNumber);
  tr_cmd->add_option("--seed", tr.seed, "run seed");
  tr_cmd->add_option("--lr", tr.train.adam.lr, "learning rate");
  tr_cmd->add_option("--decay", tr.train.adam.lr_decay, "learning-rate decay");
  tr_cmd->add_option("--l2", tr.train.adam.weight_decay_l2, "L2 weight decay");
  tr_cmd->add_flag("--train-on-all", tr.train_on_all,
                   "train on every track (no split)");
  tr_cmd->add_flag("!--no-normalize", tr.normalize,
                   "disable per-track max normalization");
  tr_cmd->add_option("--filters", tr.filters, "conv filters");
  tr_cmd->add_option("--conv-blocks", tr.conv_blocks, "conv blocks");
  tr_cmd->add_option("--lstm-layers", tr.lstm_layers, "lstm layers");
  tr_cmd->add_option("--lstm-hidden", tr.lstm_hidden, "lstm hidden size");
  tr_cmd->add_option("--fc", tr.fc_sizes, "fc layer sizes");
  tr_cmd->add_option("--dropout-recurrent", tr.dropout_recurrent,
                     "recurrent dropout");
  tr_cmd->add_option("--dropout-fc", tr.dropout_fc, "fc dropout");

  ExtractArgs ex;
  auto* ex_cmd = app.add_subcommand("extract", "emit highlight spans");
  ex_cmd->add_option("--checkpoint", ex.checkpoint_path, "trained checkpoint");
  ex_cmd->add_option("--manifest", ex.manifest_path, "manifest csv")
      ->required();
  ex_cmd->add_option("--cache-dir", ex.cache_dir_flag, "cache directory");
  ex_cmd->add_option("--out", ex.out_path, "records jsonl path");
  ex_cmd->add_option("--csv", ex.csv_path, "records csv path");
  ex_cmd->add_option("--extractor", ex.extractor, "model|energy|f1m")
      ->check(CLI::IsMember({"model", "energy", "f1m"}));
  ex_cmd->add_option("--gamma", ex.gamma, "attention weight")
      ->check(CLI::Range(0.0, 1.0));
  ex_cmd->add_option("--beta", ex.beta, "window-sum weight")
      ->check(CLI::Range(0.0, 1.0));
  ex_cmd->add_option("--duration", ex.duration_s, "highlight seconds")
      ->check(CLI::PositiveNumber);
  ex_cmd->add_option("--dump-attention", ex.dump_attention_dir,
                     "write per-track attention csv files here");
  ex_cmd->add_flag("!--no-normalize", ex.normalize,
                   "disable per-track max normalization");
  ex_cmd->add_option("--jobs", ex.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "score highlight records");
  ev_cmd->add_option("--records", ev.records_path, "records jsonl")->required();
  ev_cmd->add_option("--ground-truth", ev.ground_truth_path, "gt csv")
      ->required();
  ev_cmd->add_option("--manifest", ev.manifest_path, "manifest csv")
      ->required();
  ev_cmd->add_option("--report", ev.report_path, "report json path");
  ev_cmd->add_option("--table", ev.table_path, "text table path");
  ev_cmd->add_option("--checkpoint", ev.checkpoint_path,
                     "adds recall@3 over the test split");
  ev_cmd->add_option("--cache-dir", ev.cache_dir_flag, "cache directory");
  ev_cmd->add_option("--attention-stats", ev.attention_stats_dir,
                     "write attention stats/correlation csvs here");
  ev_cmd->add_flag("!--no-normalize", ev.normalize,
                   "disable per-track max normalization");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      synth.opts.out_dir = synth_out;
      return cmd_synth(synth);
    }
    if (pre_cmd->parsed()) return cmd_preprocess(pre);
    if (tr_cmd->parsed()) return cmd_train(tr);
    if (ex_cmd->parsed()) return cmd_extract(ex);
    if (ev_cmd->parsed()) return cmd_eval(ev);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
