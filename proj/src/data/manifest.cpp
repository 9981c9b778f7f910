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

#include "cranhl/data/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cranhl/data/genres.hpp"
#include "cranhl/error.hpp"

namespace cranhl::data {

std::string split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  throw InvalidInputError("unknown split");
}

const TrackRecord* Manifest::find(const std::string& track_id) const {
  for (const TrackRecord& r : records) {
    if (r.track_id == track_id) return &r;
  }
  return nullptr;
}

Split split_of_percentile(double percentile) {
  if (percentile < 0.0 || percentile >= 100.0) {
    throw InvalidInputError("rank percentile out of [0, 100): " +
                            std::to_string(percentile));
  }
  if (percentile < 10.0) return Split::kTest;
  if (percentile < 20.0) return Split::kVal;
  return Split::kTrain;
}

std::map<std::string, Split> split_by_rank(const Manifest& manifest) {
  std::map<std::string, Split> out;
  for (const TrackRecord& r : manifest.records) {
    out[r.track_id] = split_of_percentile(r.rank_percentile);
  }
  return out;
}

Manifest load_manifest(const std::filesystem::path& path, bool require_audio) {
  std::ifstream is(path);
  if (!is) throw IoError("manifest: cannot open: " + path.string());
  std::string line;
  if (!std::getline(is, line) ||
      line.rfind("track_id,path,genres,rank_percentile", 0) != 0) {
    throw CorruptFileError("manifest: bad header in " + path.string());
  }

  Manifest manifest;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, audio, genres, rank;
    if (!std::getline(ss, id, ',') || !std::getline(ss, audio, ',') ||
        !std::getline(ss, genres, ',') || !std::getline(ss, rank)) {
      throw CorruptFileError("manifest: line " + std::to_string(line_no) +
                             " malformed in " + path.string());
    }
    if (!seen.insert(id).second) {
      throw InvalidInputError("manifest: duplicate track_id '" + id + "'");
    }
    TrackRecord record;
    record.track_id = id;
    record.audio_path = path.parent_path() / audio;
    std::istringstream gs(genres);
    std::string g;
    while (std::getline(gs, g, '|')) {
      if (!g.empty()) record.genre_ids.insert(genre_index(g));
    }
    if (record.genre_ids.empty()) {
      throw InvalidInputError("manifest: track '" + id + "' has no genres");
    }
    try {
      record.rank_percentile = std::stod(rank);
    } catch (const std::exception&) {
      throw CorruptFileError("manifest: line " + std::to_string(line_no) +
                             " has a non-numeric rank in " + path.string());
    }
    split_of_percentile(record.rank_percentile);  // range check
    if (require_audio && !std::filesystem::exists(record.audio_path)) {
      throw IoError("manifest: missing audio file: " +
                    record.audio_path.string());
    }
    manifest.records.push_back(std::move(record));
  }
  return manifest;
}

void save_manifest(const std::filesystem::path& path,
                   const Manifest& manifest) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("manifest: cannot write: " + path.string());
  os << "track_id,path,genres,rank_percentile\n";
  for (const TrackRecord& r : manifest.records) {
    std::string genres;
    for (std::size_t g : r.genre_ids) {
      if (!genres.empty()) genres += '|';
      genres += genre_name(g);
    }
    os << r.track_id << ',' << r.audio_path.filename().string() << ','
       << genres << ',' << nlohmann::json(r.rank_percentile).dump() << '\n';
  }
  if (!os) throw IoError("manifest: write failed: " + path.string());
}

}  // namespace cranhl::data
