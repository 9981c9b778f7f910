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

#include "cranhl/data/synth.hpp"

#include <cmath>
#include <numbers>

#include "cranhl/audio/wav.hpp"
#include "cranhl/data/genres.hpp"
#include "cranhl/error.hpp"
#include "cranhl/rng.hpp"

namespace cranhl::data {

namespace {

// Per-genre timbre: fundamental, harmonic stack shape, tremolo rate.
struct Recipe {
  double f0;
  std::size_t harmonics;
  double decay;
  double am_rate;
};

Recipe recipe_for(std::size_t genre) {
  // Fundamentals spaced a fourth apart keep the ten stacks well separated
  // on the mel axis (110 Hz .. ~1480 Hz, harmonics under Nyquist at 8372).
  Recipe r;
  r.f0 = 110.0 * std::pow(2.0, 5.0 * static_cast<double>(genre) / 12.0);
  r.harmonics = 3 + genre % 3;
  r.decay = 0.60 + 0.04 * static_cast<double>(genre);
  r.am_rate = 1.0 + 0.6 * static_cast<double>(genre);
  return r;
}

// Harmonic stack at time t; partials above the band limit are skipped.
double voice(const Recipe& r, double t, double band_limit,
             std::span<const double> phases, double freq_scale) {
  double v = 0.0;
  double amp = 1.0;
  for (std::size_t h = 0; h < r.harmonics; ++h) {
    const double f = r.f0 * freq_scale * static_cast<double>(h + 1);
    if (f < band_limit) {
      v += amp * std::sin(2.0 * std::numbers::pi * f * t +
                          phases[h % phases.size()]);
    }
    amp *= r.decay;
  }
  const double tremolo =
      0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * r.am_rate * t);
  return v * tremolo;
}

struct TrackPlan {
  std::set<std::size_t> genres;
  double duration_s;
  double chorus_start_s;
};

std::vector<double> render_track(const TrackPlan& plan, double sample_rate,
                                 double chorus_s, double chorus_boost,
                                 Rng rng) {
  const auto n = static_cast<std::size_t>(plan.duration_s * sample_rate);
  const double band_limit = 0.45 * sample_rate;
  std::vector<double> phases(8);
  for (double& p : phases) p = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<Recipe> recipes;
  for (std::size_t g : plan.genres) recipes.push_back(recipe_for(g));
  const Recipe chorus_layer{recipes[0].f0 * 1.5, 3, 0.7,
                            recipes[0].am_rate * 2.0};

  const double verse_amp = 0.16;
  const double ramp_s = 0.2;
  const double c0 = plan.chorus_start_s, c1 = plan.chorus_start_s + chorus_s;

  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double v = 0.0;
    double weight = 1.0;
    for (const Recipe& r : recipes) {
      v += weight * voice(r, t, band_limit, phases, 1.0);
      weight *= 0.5;  // secondary genre blended at half strength
    }

    // Linear ramps at the chorus edges avoid clicks but keep the energy
    // step sharp relative to the frame length.
    double chorus_mix = 0.0;
    if (t >= c0 && t < c1) {
      chorus_mix = std::min({1.0, (t - c0) / ramp_s, (c1 - t) / ramp_s});
    }
    if (chorus_mix > 0.0) {
      v += chorus_mix * 0.8 * voice(chorus_layer, t, band_limit, phases, 1.0);
      v *= 1.0 + chorus_mix * (chorus_boost - 1.0);
    }
    samples[i] = verse_amp * v + 0.004 * rng.normal();
  }

  // Headroom for the PCM16 writer's clamp.
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.98) {
    const double scale = 0.98 / peak;
    for (double& s : samples) s *= scale;
  }
  return samples;
}

// Mean energy of ~61 ms frames inside/outside the chorus interval.
std::pair<double, double> chorus_energy(const std::vector<double>& samples,
                                        double sample_rate, double c0,
                                        double c1) {
  const std::size_t frame = 512;
  double in_sum = 0.0, out_sum = 0.0;
  std::size_t in_n = 0, out_n = 0;
  for (std::size_t start = 0; start + frame <= samples.size(); start += frame) {
    double e = 0.0;
    for (std::size_t i = 0; i < frame; ++i) {
      e += samples[start + i] * samples[start + i];
    }
    const double t = static_cast<double>(start) / sample_rate;
    if (t >= c0 && t + static_cast<double>(frame) / sample_rate <= c1) {
      in_sum += e;
      ++in_n;
    } else {
      out_sum += e;
      ++out_n;
    }
  }
  return {in_n ? in_sum / static_cast<double>(in_n) : 0.0,
          out_n ? out_sum / static_cast<double>(out_n) : 0.0};
}

}  // namespace

std::vector<double> genre_target(const std::set<std::size_t>& genre_ids,
                                 std::size_t genre_count) {
  if (genre_ids.empty()) {
    throw InvalidInputError("genre_target: empty genre set");
  }
  std::vector<double> target(genre_count, 0.0);
  const double w = 1.0 / static_cast<double>(genre_ids.size());
  for (std::size_t g : genre_ids) {
    if (g >= genre_count) {
      throw InvalidInputError("genre_target: genre id out of range");
    }
    target[g] = w;
  }
  return target;
}

SynthCorpus synth_corpus(const SynthOptions& options) {
  if (options.n_tracks == 0) {
    throw InvalidInputError("synth: need at least one track");
  }
  if (options.n_genres == 0 || options.n_genres > kGenreCount) {
    throw InvalidInputError("synth: n_genres must be in [1, " +
                            std::to_string(kGenreCount) + "]");
  }
  if (options.n_tracks < options.n_genres) {
    throw InvalidInputError("synth: need at least one track per genre");
  }
  if (options.min_duration_s < options.chorus_s + 15.0) {
    throw InvalidInputError("synth: tracks too short to hold a chorus");
  }
  std::filesystem::create_directories(options.out_dir);

  const Rng base(options.seed);
  SynthCorpus corpus;
  corpus.manifest.ranking_name = "popularity";
  corpus.manifest_newrelease.ranking_name = "newrelease";

  for (std::size_t i = 0; i < options.n_tracks; ++i) {
    Rng rng = base.derive("track").derive(i);
    char id[32];
    std::snprintf(id, sizeof id, "synth%04zu", i);

    TrackPlan plan;
    plan.genres.insert(i % options.n_genres);  // round-robin coverage
    if (rng.bernoulli(options.multi_genre_fraction)) {
      plan.genres.insert((i % options.n_genres + 1) % options.n_genres);
    }
    plan.duration_s =
        rng.uniform(options.min_duration_s, options.max_duration_s);
    plan.chorus_start_s =
        rng.uniform(5.0, plan.duration_s - options.chorus_s - 5.0);

    // Boost until the planted chorus clears the energy ratio.
    double boost = 1.9;
    std::vector<double> samples;
    for (int attempt = 0; attempt < 8; ++attempt) {
      samples = render_track(plan, options.sample_rate, options.chorus_s,
                             boost, rng.derive("render"));
      auto [inside, outside] = chorus_energy(
          samples, options.sample_rate, plan.chorus_start_s,
          plan.chorus_start_s + options.chorus_s);
      if (outside > 0 && inside >= options.chorus_energy_ratio * outside) {
        break;
      }
      boost *= 1.25;
    }

    audio::SampleBuffer buffer;
    buffer.sample_rate = options.sample_rate;
    buffer.samples = std::move(samples);
    const std::string filename = std::string(id) + ".wav";
    audio::write_wav_pcm16(options.out_dir / filename, buffer);

    TrackRecord record;
    record.track_id = id;
    record.audio_path = options.out_dir / filename;
    record.genre_ids = plan.genres;
    record.rank_percentile = rng.derive("rank-pop").uniform(0.0, 100.0);
    corpus.manifest.records.push_back(record);

    record.rank_percentile = rng.derive("rank-new").uniform(0.0, 100.0);
    corpus.manifest_newrelease.records.push_back(record);

    corpus.ground_truth.push_back(
        {id, plan.chorus_start_s, plan.chorus_start_s + options.chorus_s});
  }

  corpus.manifest_path = options.out_dir / "manifest.csv";
  corpus.manifest_newrelease_path =
      options.out_dir / "manifest_newrelease.csv";
  corpus.ground_truth_path = options.out_dir / "ground_truth.csv";
  save_manifest(corpus.manifest_path, corpus.manifest);
  save_manifest(corpus.manifest_newrelease_path, corpus.manifest_newrelease);
  eval::save_ground_truth(corpus.ground_truth_path, corpus.ground_truth);
  return corpus;
}

}  // namespace cranhl::data
