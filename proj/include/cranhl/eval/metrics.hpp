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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cranhl/highlight/highlight.hpp"

namespace cranhl::eval {

// Expert-annotated highlight interval on the original track timeline.
struct GroundTruth {
  std::string track_id;
  double start_s = 0.0;
  double end_s = 0.0;

  double duration_s() const { return end_s - start_s; }
};

// Seconds of intersection between the annotated interval and the extracted
// span (both half-open).
double overlap(const GroundTruth& gt, const highlight::HighlightSpan& h);

// 1 iff the overlap strictly exceeds half the extracted span's own length.
// A longer span therefore has a proportionally higher bar.
int recall_bit(const GroundTruth& gt, const highlight::HighlightSpan& h);

// 1 iff any true genre appears among the first k predictions.
int recall_at_k(std::span<const std::size_t> predicted,
                const std::set<std::size_t>& true_genres, std::size_t k = 3);

// CSV with header track_id,start_s,end_s. Multiple annotations for one
// track are reduced to the interval with the median start (lower median for
// even counts).
std::map<std::string, GroundTruth> load_ground_truth(
    const std::filesystem::path& path);

void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruth> rows);

}  // namespace cranhl::eval
