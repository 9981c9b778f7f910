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

#include "cranhl/eval/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cranhl/error.hpp"

namespace cranhl::eval {

double overlap(const GroundTruth& gt, const highlight::HighlightSpan& h) {
  const double lo = std::max(gt.start_s, h.start_s);
  const double hi = std::min(gt.end_s, h.end_s());
  return std::max(0.0, hi - lo);
}

int recall_bit(const GroundTruth& gt, const highlight::HighlightSpan& h) {
  if (h.duration_s <= 0) {
    throw InvalidInputError("recall_bit: span duration must be positive");
  }
  return overlap(gt, h) > 0.5 * h.duration_s ? 1 : 0;
}

int recall_at_k(std::span<const std::size_t> predicted,
                const std::set<std::size_t>& true_genres, std::size_t k) {
  if (true_genres.empty()) {
    throw InvalidInputError("recall_at_k: empty true genre set");
  }
  const std::size_t limit = std::min(k, predicted.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (true_genres.count(predicted[i]) > 0) return 1;
  }
  return 0;
}

std::map<std::string, GroundTruth> load_ground_truth(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("ground truth: cannot open: " + path.string());
  std::string line;
  if (!std::getline(is, line) || line.rfind("track_id,start_s,end_s", 0) != 0) {
    throw CorruptFileError("ground truth: bad header in " + path.string());
  }
  std::map<std::string, std::vector<GroundTruth>> grouped;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    GroundTruth gt;
    std::string start, end;
    if (!std::getline(ss, gt.track_id, ',') || !std::getline(ss, start, ',') ||
        !std::getline(ss, end)) {
      throw CorruptFileError("ground truth: line " + std::to_string(line_no) +
                             " malformed in " + path.string());
    }
    try {
      gt.start_s = std::stod(start);
      gt.end_s = std::stod(end);
    } catch (const std::exception&) {
      throw CorruptFileError("ground truth: line " + std::to_string(line_no) +
                             " has non-numeric bounds in " + path.string());
    }
    if (!(gt.start_s >= 0.0 && gt.start_s < gt.end_s)) {
      throw CorruptFileError("ground truth: line " + std::to_string(line_no) +
                             " violates 0 <= start < end in " + path.string());
    }
    grouped[gt.track_id].push_back(gt);
  }

  std::map<std::string, GroundTruth> out;
  for (auto& [id, rows] : grouped) {
    std::sort(rows.begin(), rows.end(),
              [](const GroundTruth& a, const GroundTruth& b) {
                return a.start_s < b.start_s;
              });
    out[id] = rows[(rows.size() - 1) / 2];  // median start, lower on even
  }
  return out;
}

void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruth> rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("ground truth: cannot write: " + path.string());
  os << "track_id,start_s,end_s\n";
  for (const GroundTruth& gt : rows) {
    os << gt.track_id << ',' << nlohmann::json(gt.start_s).dump() << ','
       << nlohmann::json(gt.end_s).dump() << '\n';
  }
  if (!os) throw IoError("ground truth: write failed: " + path.string());
}

}  // namespace cranhl::eval
