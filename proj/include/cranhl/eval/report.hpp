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

#include "json.hpp"

#include "cranhl/data/manifest.hpp"
#include "cranhl/eval/metrics.hpp"
#include "cranhl/highlight/records.hpp"

namespace cranhl::eval {

struct TrackResult {
  std::string track_id;
  std::set<std::size_t> genre_ids;
  double start_s = 0.0;
  double duration_s = 0.0;
  double overlap_s = 0.0;
  int recall = 0;
};

// Mean +- std (population) of overlap seconds plus the recall rate.
struct Aggregate {
  std::size_t n = 0;
  double mean_overlap = 0.0;
  double std_overlap = 0.0;
  double recall_rate = 0.0;
};

struct ExtractorReport {
  std::string extractor_name;
  std::vector<TrackResult> rows;  // sorted by track_id
  Aggregate overall;
  std::map<std::size_t, Aggregate> per_genre;  // multi-genre tracks count
                                               // once per genre
  // Reserved for externally supplied listener ratings; never computed here.
  std::optional<double> qual;
};

struct ClassifierEval {
  std::string ranking_name;
  double recall_at_3 = 0.0;
  std::size_t n_tracks = 0;
};

struct EvalReport {
  std::string ranking_name;
  std::vector<ExtractorReport> extractors;  // sorted by extractor name
  std::vector<std::string> skipped_track_ids;  // had records but no ground
                                               // truth (or vice versa)
  std::optional<ClassifierEval> classification;

  nlohmann::json to_json() const;
  // Per-genre mean-overlap table, one column per extractor.
  std::string to_table() const;
};

// Scores every (extractor, track) pair found in the records against the
// ground truth. Tracks missing ground truth or missing from the manifest
// are skipped and listed. Aggregates count a multi-genre track once per
// genre. Output ordering is deterministic (extractors and rows sorted).
EvalReport evaluate(const data::Manifest& manifest,
                    const std::map<std::string, GroundTruth>& ground_truth,
                    const std::vector<highlight::HighlightRecord>& records,
                    std::optional<ClassifierEval> classification = {});

}  // namespace cranhl::eval
