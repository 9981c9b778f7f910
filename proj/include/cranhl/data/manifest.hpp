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
#include <set>
#include <string>
#include <vector>

namespace cranhl::data {

enum class Split { kTrain, kVal, kTest };

std::string split_name(Split s);

struct TrackRecord {
  std::string track_id;
  std::filesystem::path audio_path;
  std::set<std::size_t> genre_ids;  // non-empty
  double rank_percentile = 0.0;     // [0, 100)
};

// Track list under one named ranking. Splits are derived from the rank
// percentile and are disjoint and exhaustive by construction.
struct Manifest {
  std::string ranking_name = "popularity";
  std::vector<TrackRecord> records;

  const TrackRecord* find(const std::string& track_id) const;
};

// Rank-based split: test [0,10), val [10,20), train [20,100).
Split split_of_percentile(double percentile);
std::map<std::string, Split> split_by_rank(const Manifest& manifest);

// CSV with header track_id,path,genres,rank_percentile (genres are
// '|'-separated names). Validates ids are unique, genres known, rank in
// range; with `require_audio`, every referenced file must exist.
Manifest load_manifest(const std::filesystem::path& path,
                       bool require_audio = true);

void save_manifest(const std::filesystem::path& path,
                   const Manifest& manifest);

}  // namespace cranhl::data
