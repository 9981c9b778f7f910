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
#include <string>
#include <vector>

#include "cranhl/highlight/highlight.hpp"

namespace cranhl::highlight {

// One extracted highlight, as emitted to line-delimited JSON and CSV.
struct HighlightRecord {
  std::string track_id;
  double start_s = 0.0;
  double duration_s = 0.0;
  double score = 0.0;
  std::string extractor_name;

  HighlightSpan span() const { return {start_s, duration_s, score}; }
};

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<HighlightRecord>& records);

std::vector<HighlightRecord> read_records_jsonl(
    const std::filesystem::path& path);

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<HighlightRecord>& records);

}  // namespace cranhl::highlight
