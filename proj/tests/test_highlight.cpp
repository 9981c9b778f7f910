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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"

#include "cranhl/error.hpp"
#include "cranhl/highlight/highlight.hpp"
#include "cranhl/highlight/records.hpp"
#include "cranhl/rng.hpp"

using namespace cranhl;
using namespace cranhl::highlight;

namespace {

// Mel grid whose [start_s, start_s+30) block carries `boost`-times energy.
audio::MelSpectrogram planted_mel(double start_s, double boost,
                                  std::uint64_t seed) {
  audio::MelSpectrogram mel;
  mel.values = audio::Mat(audio::kNumMels, audio::kNumFrames);
  Rng rng(seed);
  const double fd = mel.frame_duration;
  for (std::size_t n = 0; n < audio::kNumFrames; ++n) {
    const double t = static_cast<double>(n) * fd;
    const bool chorus = t >= start_s && t < start_s + 30.0;
    for (std::size_t j = 0; j < audio::kNumMels; ++j) {
      mel.values.at(j, n) =
          rng.uniform(0.2, 0.4) * (chorus ? boost : 1.0);
    }
  }
  return mel;
}

std::vector<double> random_alpha(std::size_t t_n, Rng& rng) {
  std::vector<double> alpha(t_n);
  double sum = 0.0;
  for (double& a : alpha) {
    a = rng.uniform(0.01, 1.0);
    sum += a;
  }
  for (double& a : alpha) a /= sum;
  // Renormalize exactly: softmax-grade normalization leaves dust.
  double check = 0.0;
  for (double a : alpha) check += a;
  alpha[0] += 1.0 - check;
  return alpha;
}

}  // namespace

TEST_CASE("upsample_attention: uniform slots spread to uniform frames") {
  std::vector<double> alpha(250, 1.0 / 250.0);
  double fix = 0.0;
  for (double a : alpha) fix += a;
  alpha[0] += 1.0 - fix;
  const auto frames = upsample_attention(alpha, 4000);
  REQUIRE(frames.size() == 4000);
  for (double f : frames) {
    REQUIRE(f == doctest::Approx(1.0 / 4000.0).epsilon(1e-12));
  }
}

TEST_CASE("upsample_attention: a one-hot slot fills exactly its 16 frames") {
  std::vector<double> alpha(250, 0.0);
  alpha[0] = 1.0;
  const auto frames = upsample_attention(alpha, 4000);
  for (std::size_t i = 0; i < 16; ++i) REQUIRE(frames[i] == 1.0 / 16.0);
  for (std::size_t i = 16; i < 4000; ++i) REQUIRE(frames[i] == 0.0);
}

TEST_CASE("upsample_attention: mass is preserved for random profiles") {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto alpha = random_alpha(250, rng);
    const auto frames = upsample_attention(alpha, 4000);
    double sum = 0.0;
    for (double f : frames) sum += f;
    REQUIRE(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("upsample_attention: misaligned or unnormalized input is rejected") {
  std::vector<double> alpha(251, 1.0 / 251.0);
  CHECK_THROWS_AS(upsample_attention(alpha, 4000), InvalidInputError);
  std::vector<double> bad(250, 1.0);
  CHECK_THROWS_AS(upsample_attention(bad, 4000), InvalidInputError);
}

TEST_CASE("fuse: gamma endpoints reduce to energy and attention") {
  audio::MelSpectrogram mel = planted_mel(100.0, 1.0, 52);
  Rng rng(53);
  const auto alpha_frames =
      upsample_attention(random_alpha(250, rng), 4000);
  const auto e_mean = audio::mean_energy(mel);

  const auto gamma0 = fuse(mel, alpha_frames, 0.0);
  for (std::size_t i = 0; i < 4000; ++i) REQUIRE(gamma0[i] == e_mean[i]);

  const auto gamma1 = fuse(mel, alpha_frames, 1.0);
  for (std::size_t i = 0; i < 4000; ++i) REQUIRE(gamma1[i] == alpha_frames[i]);
}

TEST_CASE("fuse: zero mel and uniform attention give a flat analytic value") {
  audio::MelSpectrogram mel;
  mel.values = audio::Mat(audio::kNumMels, audio::kNumFrames);
  std::vector<double> uniform(4000, 1.0 / 4000.0);
  const auto fused = fuse(mel, uniform, 0.1);
  for (double v : fused) {
    REQUIRE(v == doctest::Approx(0.1 / 4000.0).epsilon(1e-12));
  }
}

TEST_CASE("highlight_scores: constant signals collapse to beta*S*c") {
  const std::size_t s = 50;
  std::vector<double> e_tilde(400, 0.25), e_mean(400, 0.7);
  const auto h = highlight_scores(e_tilde, e_mean, s, 0.5);
  REQUIRE(h.size() == 400 - s + 1);
  for (double v : h) {
    REQUIRE(v == doctest::Approx(0.5 * 50 * 0.25).epsilon(1e-12));
  }
}

TEST_CASE("highlight_scores: beta=1 is a plain sliding-window sum") {
  Rng rng(54);
  std::vector<double> e_tilde(64), e_mean(64);
  for (auto* v : {&e_tilde, &e_mean}) {
    for (double& x : *v) x = rng.uniform(0.0, 1.0);
  }
  const auto h = highlight_scores(e_tilde, e_mean, 8, 1.0);
  for (std::size_t n = 0; n < h.size(); ++n) {
    double acc = 0.0;
    for (std::size_t s = 0; s < 8; ++s) acc += e_tilde[n + s];
    REQUIRE(h[n] == doctest::Approx(acc).epsilon(1e-15));
  }
}

TEST_CASE("highlight_scores: random case matches the double-loop oracle") {
  Rng rng(55);
  std::vector<double> e_tilde(200), e_mean(200);
  for (double& x : e_tilde) x = rng.uniform(0.0, 1.0);
  for (double& x : e_mean) x = rng.uniform(0.0, 1.0);
  const auto h = highlight_scores(e_tilde, e_mean, 8, 0.5);
  const auto ref = oracle::highlight_scores(e_tilde, e_mean, 8, 0.5);
  REQUIRE(h.size() == ref.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    REQUIRE(std::abs(h[i] - ref[i]) <= 1e-12);
  }
}

TEST_CASE("select_highlight: argmax with earliest-wins ties") {
  const std::vector<double> scores{1.0, 3.0, 2.0};
  HighlightSpan span = select_highlight(scores, 0.5, 30.0);
  CHECK(span.start_s == 0.5);
  CHECK(span.score == 3.0);
  CHECK(span.duration_s == 30.0);

  const std::vector<double> flat(10, 2.0);
  CHECK(select_highlight(flat, 0.5, 30.0).start_s == 0.0);

  Rng rng(56);
  std::vector<double> random_scores(100);
  for (double& v : random_scores) v = rng.uniform(-1.0, 1.0);
  std::size_t best = 0;
  for (std::size_t i = 1; i < 100; ++i) {
    if (random_scores[i] > random_scores[best]) best = i;
  }
  CHECK(select_highlight(random_scores, 1.0, 30.0).start_s ==
        static_cast<double>(best));
}

TEST_CASE("energy_baseline: finds a planted high-energy block within 1 s") {
  const double planted = 120.0;
  audio::MelSpectrogram mel = planted_mel(planted, 4.0, 57);
  HighlightSpan span = energy_baseline(mel);
  CHECK(span.duration_s == 30.0);
  CHECK(std::abs(span.start_s - planted) <= 1.0);
}

TEST_CASE("energy_baseline: silence selects the earliest window") {
  audio::MelSpectrogram mel;
  mel.values = audio::Mat(audio::kNumMels, audio::kNumFrames);
  HighlightSpan span = energy_baseline(mel);
  CHECK(span.start_s == 0.0);
}

TEST_CASE("energy_baseline: equals the gamma=0 fused composition exactly") {
  audio::MelSpectrogram mel = planted_mel(60.0, 3.0, 58);
  Rng rng(59);
  const auto alpha = random_alpha(250, rng);
  HighlightSpan fused = attention_fused_highlight(mel, alpha, 0.0, 0.5);
  HighlightSpan energy = energy_baseline(mel);
  CHECK(fused.start_s == energy.start_s);
  CHECK(fused.score == energy.score);
}

TEST_CASE("scale invariance at gamma=0: global energy scaling moves nothing") {
  audio::MelSpectrogram mel = planted_mel(90.0, 3.0, 60);
  audio::MelSpectrogram scaled = mel;
  for (double& v : scaled.values.v) v *= 7.5;
  // Unnormalized path: scores scale linearly, argmax is invariant.
  const auto e1 = audio::mean_energy(mel);
  const auto e2 = audio::mean_energy(scaled);
  const std::size_t s_frames = highlight_frames(mel.frame_duration);
  const auto h1 = highlight_scores(e1, e1, s_frames, 0.5);
  const auto h2 = highlight_scores(e2, e2, s_frames, 0.5);
  const HighlightSpan s1 = select_highlight(h1, mel.frame_duration);
  const HighlightSpan s2 = select_highlight(h2, mel.frame_duration);
  CHECK(s1.start_s == s2.start_s);
  CHECK(s2.score == doctest::Approx(7.5 * s1.score).epsilon(1e-9));
}

TEST_CASE("span validity: selections stay inside the canonical window") {
  Rng rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    audio::MelSpectrogram mel =
        planted_mel(rng.uniform(0.0, 210.0), 3.0, 62 + trial);
    HighlightSpan span = energy_baseline(mel);
    CHECK(span.start_s >= 0.0);
    CHECK(span.end_s() <= audio::kCanonicalSeconds + 1e-9);
  }
}

TEST_CASE("f1m_baseline: first minute, clamped to short tracks") {
  HighlightSpan long_track = f1m_baseline(240.0);
  CHECK(long_track.start_s == 0.0);
  CHECK(long_track.duration_s == 60.0);

  HighlightSpan short_track = f1m_baseline(45.0);
  CHECK(short_track.duration_s == 45.0);

  CHECK_THROWS_AS(f1m_baseline(0.0), InvalidInputError);

  // Disjoint from a [90, 120) annotation.
  CHECK(oracle::interval_overlap(0.0, 60.0, 90.0, 120.0) == 0.0);
}

TEST_CASE("map_to_track_timeline: wrapped-tail starts return to the source") {
  // Starts are bounded by canonical_window - 30 s, so a mapped span always
  // ends inside the track.
  HighlightSpan span{210.0, 30.0, 1.0};
  HighlightSpan mapped = map_to_track_timeline(span, 200.0);
  CHECK(mapped.start_s ==
        doctest::Approx(210.0 - (audio::kCanonicalSeconds - 200.0)));
  CHECK(mapped.start_s + mapped.duration_s <= 200.0 + 1e-9);

  HighlightSpan inside{100.0, 30.0, 1.0};
  CHECK(map_to_track_timeline(inside, 200.0).start_s == 100.0);
}

TEST_CASE("records: jsonl round-trip and csv header") {
  const std::vector<HighlightRecord> records{
      {"track-a", 12.5, 30.0, 3.25, "cran"},
      {"track-b", 0.0, 60.0, 0.0, "f1m"},
  };
  auto dir = std::filesystem::temp_directory_path() / "cranhl_hl_test";
  std::filesystem::create_directories(dir);
  const auto jsonl = dir / "records.jsonl";
  write_records_jsonl(jsonl, records);
  const auto back = read_records_jsonl(jsonl);
  REQUIRE(back.size() == 2);
  CHECK(back[0].track_id == "track-a");
  CHECK(back[0].start_s == 12.5);
  CHECK(back[0].extractor_name == "cran");
  CHECK(back[1].duration_s == 60.0);

  const auto csv = dir / "records.csv";
  write_records_csv(csv, records);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "track_id,start_s,duration_s,score,extractor_name");
}
