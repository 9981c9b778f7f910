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

#include "cranhl/highlight/records.hpp"

#include <fstream>

#include "json.hpp"

#include "cranhl/error.hpp"

namespace cranhl::highlight {

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<HighlightRecord>& records) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("records: cannot write: " + path.string());
  for (const HighlightRecord& r : records) {
    nlohmann::json j{{"track_id", r.track_id},
                     {"start_s", r.start_s},
                     {"duration_s", r.duration_s},
                     {"score", r.score},
                     {"extractor_name", r.extractor_name}};
    os << j.dump() << '\n';
  }
  if (!os) throw IoError("records: write failed: " + path.string());
}

std::vector<HighlightRecord> read_records_jsonl(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("records: cannot open: " + path.string());
  std::vector<HighlightRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      HighlightRecord r;
      r.track_id = j.at("track_id").get<std::string>();
      r.start_s = j.at("start_s").get<double>();
      r.duration_s = j.at("duration_s").get<double>();
      r.score = j.at("score").get<double>();
      r.extractor_name = j.at("extractor_name").get<std::string>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw CorruptFileError("records: line " + std::to_string(line_no) +
                             " of " + path.string() + ": " + e.what());
    }
  }
  return out;
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<HighlightRecord>& records) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("records: cannot write: " + path.string());
  os << "track_id,start_s,duration_s,score,extractor_name\n";
  // Numbers use nlohmann's shortest round-trip formatting, same as the jsonl.
  for (const HighlightRecord& r : records) {
    os << r.track_id << ',' << nlohmann::json(r.start_s).dump() << ','
       << nlohmann::json(r.duration_s).dump() << ','
       << nlohmann::json(r.score).dump() << ',' << r.extractor_name << '\n';
  }
  if (!os) throw IoError("records: write failed: " + path.string());
}

}  // namespace cranhl::highlight
