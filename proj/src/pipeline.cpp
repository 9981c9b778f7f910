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

#include "cranhl/pipeline.hpp"

#include "cranhl/audio/wav.hpp"

namespace cranhl::pipeline {

audio::MelSpectrogram preprocess_file(const std::filesystem::path& wav_path) {
  audio::SampleBuffer buffer = audio::read_wav(wav_path);
  if (buffer.sample_rate != audio::kCanonicalRate) {
    buffer = audio::resample(buffer, audio::kCanonicalRate);
  }
  return audio::mel_spectrogram(buffer);
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir,
                                 const std::string& track_id) {
  return cache_dir / (track_id + ".mels");
}

model::TrainExample make_example(const data::TrackRecord& record,
                                 const audio::MelSpectrogram& mel,
                                 std::size_t genre_count, bool normalize) {
  model::TrainExample ex;
  ex.track_id = record.track_id;
  const audio::MelSpectrogram prepared =
      normalize ? audio::normalize_max(mel) : mel;
  ex.input = std::make_shared<audio::Mat>(prepared.values);
  ex.target = data::genre_target(record.genre_ids, genre_count);
  ex.genre_ids.assign(record.genre_ids.begin(), record.genre_ids.end());
  return ex;
}

std::vector<model::TrainExample> load_examples(
    const data::Manifest& manifest, const std::filesystem::path& cache_dir,
    std::optional<data::Split> split, std::size_t genre_count,
    bool normalize) {
  const auto splits = data::split_by_rank(manifest);
  std::vector<model::TrainExample> out;
  for (const data::TrackRecord& record : manifest.records) {
    if (split && splits.at(record.track_id) != *split) continue;
    const audio::MelSpectrogram mel =
        audio::load_mel_cache(cache_path(cache_dir, record.track_id));
    out.push_back(make_example(record, mel, genre_count, normalize));
  }
  return out;
}

std::vector<double> attention_profile(model::CranModel& model,
                                      const audio::Mat& input) {
  if (!model.config().has_attention()) {
    throw InvalidInputError(
        "attention_profile: variant " +
        model::variant_name(model.config().variant) +
        " produces no attention scores; use the energy extractor instead");
  }
  model::CranModel::Forward fwd =
      model.forward(input, /*training=*/false, nullptr);
  return {fwd.attention.data(), fwd.attention.data() + fwd.attention.size()};
}

highlight::HighlightRecord extract_fused(
    model::CranModel& model, const std::string& track_id,
    const audio::MelSpectrogram& mel, double track_duration_s, double gamma,
    double beta, bool normalize, double duration_s) {
  const audio::MelSpectrogram prepared =
      normalize ? audio::normalize_max(mel) : mel;
  const std::vector<double> alpha =
      attention_profile(model, prepared.values);
  highlight::HighlightSpan span = highlight::attention_fused_highlight(
      prepared, alpha, gamma, beta, duration_s);
  span = highlight::map_to_track_timeline(span, track_duration_s);
  std::string name = model::variant_name(model.config().variant);
  for (char& c : name) c = static_cast<char>(std::tolower(c));
  return {track_id, span.start_s, span.duration_s, span.score, name};
}

highlight::HighlightRecord extract_energy(
    const std::string& track_id, const audio::MelSpectrogram& mel,
    double track_duration_s, double beta, bool normalize,
    double duration_s) {
  const audio::MelSpectrogram prepared =
      normalize ? audio::normalize_max(mel) : mel;
  highlight::HighlightSpan span =
      highlight::energy_baseline(prepared, beta, duration_s);
  span = highlight::map_to_track_timeline(span, track_duration_s);
  return {track_id, span.start_s, span.duration_s, span.score, "energy"};
}

highlight::HighlightRecord extract_f1m(const std::string& track_id,
                                       double track_duration_s) {
  highlight::HighlightSpan span = highlight::f1m_baseline(track_duration_s);
  return {track_id, span.start_s, span.duration_s, span.score, "f1m"};
}

}  // namespace cranhl::pipeline
