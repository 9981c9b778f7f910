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

#include <span>
#include <vector>

#include "cranhl/audio/frontend.hpp"

namespace cranhl::highlight {

inline constexpr double kHighlightSeconds = 30.0;
inline constexpr double kDefaultGamma = 0.1;
inline constexpr double kDefaultBeta = 0.5;

// A [start, start+duration) interval, in seconds, with its selection score.
struct HighlightSpan {
  double start_s = 0.0;
  double duration_s = 0.0;
  double score = 0.0;

  double end_s() const { return start_s + duration_s; }
};

// Intermediate per-frame signals for one track.
struct FrameScores {
  std::vector<double> e_mean;   // per-frame mean mel energy
  std::vector<double> e_tilde;  // fused attention/energy score
  std::vector<double> window;   // windowed highlight score, len N - S + 1
};

// Spreads T slot weights over `frames` frames, dividing by the repeat
// factor so the total mass stays 1. The slot count must divide `frames`.
std::vector<double> upsample_attention(std::span<const double> alpha,
                                       std::size_t frames = audio::kNumFrames);

// Fused frame score: gamma * alpha_n + (1-gamma)/rows * sum_i mel[i][n].
// The mel grid should be max-normalized so the two terms share a scale.
std::vector<double> fuse(const audio::MelSpectrogram& mel,
                         std::span<const double> alpha_frames,
                         double gamma = kDefaultGamma);

// Windowed score over all candidate starts:
//   H[n] = beta * sum_{s<0..S} e_tilde[n+s]
//        + (1-beta) * (d1[n] + d2[n])
// where d1 is the first difference of e_mean and d2 its second difference;
// both difference terms are zero for n < 2.
std::vector<double> highlight_scores(std::span<const double> e_tilde,
                                     std::span<const double> e_mean,
                                     std::size_t s_frames,
                                     double beta = kDefaultBeta);

// Earliest argmax over the windowed scores, reported in seconds.
HighlightSpan select_highlight(std::span<const double> window_scores,
                               double frame_duration,
                               double duration_s = kHighlightSeconds);

std::size_t highlight_frames(double frame_duration,
                             double duration_s = kHighlightSeconds);

// Full scoring pipeline with attention. `mel` must be max-normalized.
HighlightSpan attention_fused_highlight(const audio::MelSpectrogram& mel,
                                        std::span<const double> alpha,
                                        double gamma = kDefaultGamma,
                                        double beta = kDefaultBeta,
                                        double duration_s = kHighlightSeconds);

// Energy-only pipeline: gamma = 0, attention ignored.
HighlightSpan energy_baseline(const audio::MelSpectrogram& mel,
                              double beta = kDefaultBeta,
                              double duration_s = kHighlightSeconds);

// First-minute preview baseline: [0, min(60, track duration)).
HighlightSpan f1m_baseline(double track_duration_s);

// Re-times a span selected on the canonical window onto the source track:
// spans starting in the wrap-filled tail of a short track are moved to the
// position that audio came from.
HighlightSpan map_to_track_timeline(const HighlightSpan& span,
                                    double track_duration_s);

}  // namespace cranhl::highlight
