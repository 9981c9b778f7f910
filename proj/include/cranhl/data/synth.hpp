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

#include "cranhl/data/manifest.hpp"
#include "cranhl/eval/metrics.hpp"

namespace cranhl::data {

// Seeded generator for a desk-scale corpus. Each track is structured audio
// whose genre is encoded by a distinct timbre recipe (fundamental,
// harmonic stack, amplitude-modulation rate) with one planted 30-second
// chorus of elevated energy and extra spectral content; the chorus position
// is the ground truth. Identical options produce byte-identical files.
struct SynthOptions {
  std::size_t n_tracks = 20;
  std::size_t n_genres = 4;  // uses the first n of the genre vocabulary
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  double sample_rate = audio::kCanonicalRate;
  double min_duration_s = 60.0;
  double max_duration_s = 240.0;
  double chorus_s = 30.0;
  // Fraction of tracks labeled (and blended) with a second genre.
  double multi_genre_fraction = 0.0;
  // Planted chorus mean frame energy must reach this multiple of the
  // non-chorus mean; enforced by a measure-and-boost loop.
  double chorus_energy_ratio = 2.0;
};

struct SynthCorpus {
  Manifest manifest;                    // "popularity" ranking
  Manifest manifest_newrelease;         // same tracks, independent ranks
  std::vector<eval::GroundTruth> ground_truth;
  std::filesystem::path manifest_path;
  std::filesystem::path manifest_newrelease_path;
  std::filesystem::path ground_truth_path;
};

SynthCorpus synth_corpus(const SynthOptions& options);

// Normalized multi-hot target over `genre_count` classes.
std::vector<double> genre_target(const std::set<std::size_t>& genre_ids,
                                 std::size_t genre_count);

}  // namespace cranhl::data
