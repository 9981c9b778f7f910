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

namespace cranhl::eval {

// Slot-wise mean and (population) standard deviation of attention profiles
// across the tracks of one genre.
struct AttentionStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t n_profiles = 0;
};

// Profiles grouped by genre id -> per-genre stats. Every group must be
// non-empty and profiles within a group equal-length.
std::map<std::size_t, AttentionStats> attention_stats(
    const std::map<std::size_t, std::vector<std::vector<double>>>&
        profiles_by_genre);

// CSV: genre,slot,mean,std
void write_attention_stats_csv(
    const std::filesystem::path& path,
    const std::map<std::size_t, AttentionStats>& stats);

// Two-pass Pearson correlation; absent when either series is constant.
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);

struct CorrelationRow {
  std::string track_id;
  std::set<std::size_t> genre_ids;
  std::optional<double> coefficient;
};

// CSVs: per track (track_id,genres,pearson; empty cell when absent) and the
// per-genre mean over tracks with a defined coefficient.
void write_correlation_csv(const std::filesystem::path& track_path,
                           const std::filesystem::path& genre_path,
                           std::span<const CorrelationRow> rows);

}  // namespace cranhl::eval
