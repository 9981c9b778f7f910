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

#include "cranhl/audio/frontend.hpp"
#include "cranhl/audio/mel_cache.hpp"
#include "cranhl/data/manifest.hpp"
#include "cranhl/data/synth.hpp"
#include "cranhl/highlight/records.hpp"
#include "cranhl/model/trainer.hpp"

namespace cranhl::pipeline {

// Decode -> resample to canonical rate -> mel grid.
audio::MelSpectrogram preprocess_file(const std::filesystem::path& wav_path);

std::filesystem::path cache_path(const std::filesystem::path& cache_dir,
                                 const std::string& track_id);

// Builds training examples for the manifest tracks assigned to `split`
// (or all tracks when `split` is empty) from cached spectrograms.
// Inputs are max-normalized when `normalize` is set.
std::vector<model::TrainExample> load_examples(
    const data::Manifest& manifest, const std::filesystem::path& cache_dir,
    std::optional<data::Split> split, std::size_t genre_count,
    bool normalize = true);

model::TrainExample make_example(const data::TrackRecord& record,
                                 const audio::MelSpectrogram& mel,
                                 std::size_t genre_count,
                                 bool normalize = true);

// Attention profile of one track under a model with attention.
std::vector<double> attention_profile(model::CranModel& model,
                                      const audio::Mat& input);

// Highlight record via the attention-fused scorer, mapped back to the
// source timeline.
highlight::HighlightRecord extract_fused(
    model::CranModel& model, const std::string& track_id,
    const audio::MelSpectrogram& mel, double track_duration_s, double gamma,
    double beta, bool normalize = true,
    double duration_s = highlight::kHighlightSeconds);

highlight::HighlightRecord extract_energy(
    const std::string& track_id, const audio::MelSpectrogram& mel,
    double track_duration_s, double beta, bool normalize = true,
    double duration_s = highlight::kHighlightSeconds);

highlight::HighlightRecord extract_f1m(const std::string& track_id,
                                       double track_duration_s);

}  // namespace cranhl::pipeline
