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

#include "cranhl/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cranhl/data/genres.hpp"

namespace cranhl::eval {

namespace {

Aggregate aggregate_rows(const std::vector<const TrackResult*>& rows) {
  Aggregate agg;
  agg.n = rows.size();
  if (rows.empty()) return agg;
  double sum = 0.0, recall = 0.0;
  for (const TrackResult* r : rows) {
    sum += r->overlap_s;
    recall += r->recall;
  }
  agg.mean_overlap = sum / static_cast<double>(agg.n);
  agg.recall_rate = recall / static_cast<double>(agg.n);
  double var = 0.0;
  for (const TrackResult* r : rows) {
    const double d = r->overlap_s - agg.mean_overlap;
    var += d * d;
  }
  agg.std_overlap = std::sqrt(var / static_cast<double>(agg.n));
  return agg;
}

nlohmann::json aggregate_json(const Aggregate& agg) {
  return nlohmann::json{{"n", agg.n},
                        {"mean_overlap_s", agg.mean_overlap},
                        {"std_overlap_s", agg.std_overlap},
                        {"recall", agg.recall_rate}};
}

}  // namespace

EvalReport evaluate(const data::Manifest& manifest,
                    const std::map<std::string, GroundTruth>& ground_truth,
                    const std::vector<highlight::HighlightRecord>& records,
                    std::optional<ClassifierEval> classification) {
  EvalReport report;
  report.ranking_name = manifest.ranking_name;
  report.classification = std::move(classification);

  std::set<std::string> skipped;
  std::map<std::string, std::vector<const highlight::HighlightRecord*>>
      by_extractor;
  for (const highlight::HighlightRecord& r : records) {
    const data::TrackRecord* track = manifest.find(r.track_id);
    if (track == nullptr || ground_truth.count(r.track_id) == 0) {
      skipped.insert(r.track_id);
      continue;
    }
    by_extractor[r.extractor_name].push_back(&r);
  }
  report.skipped_track_ids.assign(skipped.begin(), skipped.end());

  for (auto& [name, recs] : by_extractor) {
    ExtractorReport ex;
    ex.extractor_name = name;
    for (const highlight::HighlightRecord* r : recs) {
      const GroundTruth& gt = ground_truth.at(r->track_id);
      TrackResult row;
      row.track_id = r->track_id;
      row.genre_ids = manifest.find(r->track_id)->genre_ids;
      row.start_s = r->start_s;
      row.duration_s = r->duration_s;
      row.overlap_s = overlap(gt, r->span());
      row.recall = recall_bit(gt, r->span());
      ex.rows.push_back(std::move(row));
    }
    std::sort(ex.rows.begin(), ex.rows.end(),
              [](const TrackResult& a, const TrackResult& b) {
                return a.track_id < b.track_id;
              });

    std::vector<const TrackResult*> all;
    std::map<std::size_t, std::vector<const TrackResult*>> by_genre;
    for (const TrackResult& row : ex.rows) {
      all.push_back(&row);
      for (std::size_t g : row.genre_ids) by_genre[g].push_back(&row);
    }
    ex.overall = aggregate_rows(all);
    for (auto& [g, rows] : by_genre) ex.per_genre[g] = aggregate_rows(rows);
    report.extractors.push_back(std::move(ex));
  }
  std::sort(report.extractors.begin(), report.extractors.end(),
            [](const ExtractorReport& a, const ExtractorReport& b) {
              return a.extractor_name < b.extractor_name;
            });
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json extractors_json = nlohmann::json::array();
  for (const ExtractorReport& ex : extractors) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TrackResult& r : ex.rows) {
      std::vector<std::string> genres;
      for (std::size_t g : r.genre_ids) genres.push_back(data::genre_name(g));
      rows.push_back(nlohmann::json{{"track_id", r.track_id},
                                    {"genres", genres},
                                    {"start_s", r.start_s},
                                    {"duration_s", r.duration_s},
                                    {"overlap_s", r.overlap_s},
                                    {"recall", r.recall}});
    }
    nlohmann::json per_genre = nlohmann::json::object();
    for (const auto& [g, agg] : ex.per_genre) {
      per_genre[data::genre_name(g)] = aggregate_json(agg);
    }
    extractors_json.push_back(
        nlohmann::json{{"extractor_name", ex.extractor_name},
                       {"rows", rows},
                       {"overall", aggregate_json(ex.overall)},
                       {"per_genre", per_genre},
                       {"qual", ex.qual ? nlohmann::json(*ex.qual)
                                        : nlohmann::json(nullptr)}});
  }
  nlohmann::json j{{"ranking", ranking_name},
                   {"extractors", extractors_json},
                   {"skipped_track_ids", skipped_track_ids},
                   {"skipped", skipped_track_ids.size()}};
  if (classification) {
    j["classification"] = nlohmann::json{
        {"ranking", classification->ranking_name},
        {"recall_at_3", classification->recall_at_3},
        {"n_tracks", classification->n_tracks}};
  }
  return j;
}

std::string EvalReport::to_table() const {
  // Rows are genres, columns extractors; cells show mean overlap seconds
  // with the recall rate in parentheses.
  std::set<std::size_t> genres;
  for (const ExtractorReport& ex : extractors) {
    for (const auto& [g, agg] : ex.per_genre) genres.insert(g);
  }

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << std::left << std::setw(10) << "genre" << std::setw(6) << "n";
  for (const ExtractorReport& ex : extractors) {
    os << std::setw(18) << ex.extractor_name;
  }
  os << '\n';

  auto cell = [](const Aggregate& agg) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(2) << agg.mean_overlap << " ("
      << agg.recall_rate << ")";
    return c.str();
  };

  for (std::size_t g : genres) {
    std::size_t n = 0;
    for (const ExtractorReport& ex : extractors) {
      auto it = ex.per_genre.find(g);
      if (it != ex.per_genre.end()) n = std::max(n, it->second.n);
    }
    os << std::left << std::setw(10) << data::genre_name(g) << std::setw(6)
       << n;
    for (const ExtractorReport& ex : extractors) {
      auto it = ex.per_genre.find(g);
      os << std::setw(18) << (it == ex.per_genre.end() ? "-" : cell(it->second));
    }
    os << '\n';
  }

  std::size_t overall_n = 0;
  for (const ExtractorReport& ex : extractors) {
    overall_n = std::max(overall_n, ex.overall.n);
  }
  os << std::left << std::setw(10) << "overall" << std::setw(6) << overall_n;
  for (const ExtractorReport& ex : extractors) {
    os << std::setw(18) << cell(ex.overall);
  }
  os << '\n';
  if (classification) {
    os << "recall@3 (" << classification->ranking_name
       << "): " << std::setprecision(3) << classification->recall_at_3
       << " over " << classification->n_tracks << " tracks\n";
  }
  if (!skipped_track_ids.empty()) {
    os << "skipped (no ground truth): " << skipped_track_ids.size() << '\n';
  }
  return os.str();
}

}  // namespace cranhl::eval
