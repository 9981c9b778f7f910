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

#include "cranhl/eval/attention_analysis.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "cranhl/data/genres.hpp"
#include "cranhl/error.hpp"

namespace cranhl::eval {

std::map<std::size_t, AttentionStats> attention_stats(
    const std::map<std::size_t, std::vector<std::vector<double>>>&
        profiles_by_genre) {
  std::map<std::size_t, AttentionStats> out;
  for (const auto& [genre, profiles] : profiles_by_genre) {
    if (profiles.empty()) {
      throw InvalidInputError("attention_stats: empty group for genre " +
                              std::to_string(genre));
    }
    const std::size_t slots = profiles[0].size();
    for (const auto& p : profiles) {
      if (p.size() != slots) {
        throw InvalidInputError("attention_stats: ragged profiles");
      }
    }
    AttentionStats stats;
    stats.n_profiles = profiles.size();
    stats.mean.assign(slots, 0.0);
    stats.stddev.assign(slots, 0.0);
    const double inv = 1.0 / static_cast<double>(profiles.size());
    for (const auto& p : profiles) {
      for (std::size_t s = 0; s < slots; ++s) stats.mean[s] += p[s];
    }
    for (double& m : stats.mean) m *= inv;
    for (const auto& p : profiles) {
      for (std::size_t s = 0; s < slots; ++s) {
        const double d = p[s] - stats.mean[s];
        stats.stddev[s] += d * d;
      }
    }
    for (double& v : stats.stddev) v = std::sqrt(v * inv);
    out[genre] = std::move(stats);
  }
  return out;
}

void write_attention_stats_csv(
    const std::filesystem::path& path,
    const std::map<std::size_t, AttentionStats>& stats) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("attention stats: cannot write: " + path.string());
  os << "genre,slot,mean,std\n";
  for (const auto& [genre, s] : stats) {
    const std::string name = data::genre_name(genre);
    for (std::size_t slot = 0; slot < s.mean.size(); ++slot) {
      os << name << ',' << slot << ',' << nlohmann::json(s.mean[slot]).dump()
         << ',' << nlohmann::json(s.stddev[slot]).dump() << '\n';
    }
  }
  if (!os) throw IoError("attention stats: write failed: " + path.string());
}

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidInputError("pearson: series must be equal-length, non-empty");
  }
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a, db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;  // constant series
  return cov / std::sqrt(var_a * var_b);
}

void write_correlation_csv(const std::filesystem::path& track_path,
                           const std::filesystem::path& genre_path,
                           std::span<const CorrelationRow> rows) {
  std::ofstream os(track_path, std::ios::trunc);
  if (!os) throw IoError("correlation: cannot write: " + track_path.string());
  os << "track_id,genres,pearson\n";
  std::map<std::size_t, std::pair<double, std::size_t>> by_genre;
  for (const CorrelationRow& row : rows) {
    std::string genres;
    for (std::size_t g : row.genre_ids) {
      if (!genres.empty()) genres += '|';
      genres += data::genre_name(g);
    }
    os << row.track_id << ',' << genres << ',';
    if (row.coefficient) {
      os << nlohmann::json(*row.coefficient).dump();
      for (std::size_t g : row.genre_ids) {
        by_genre[g].first += *row.coefficient;
        by_genre[g].second += 1;
      }
    }
    os << '\n';
  }
  if (!os) throw IoError("correlation: write failed: " + track_path.string());

  std::ofstream gs(genre_path, std::ios::trunc);
  if (!gs) throw IoError("correlation: cannot write: " + genre_path.string());
  gs << "genre,mean_pearson,n\n";
  for (const auto& [g, acc] : by_genre) {
    gs << data::genre_name(g) << ','
       << nlohmann::json(acc.first / static_cast<double>(acc.second)).dump()
       << ',' << acc.second << '\n';
  }
  if (!gs) throw IoError("correlation: write failed: " + genre_path.string());
}

}  // namespace cranhl::eval
