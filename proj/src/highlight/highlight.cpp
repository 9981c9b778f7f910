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

#include "cranhl/highlight/highlight.hpp"

#include <cmath>

#include "cranhl/error.hpp"

namespace cranhl::highlight {

std::vector<double> upsample_attention(std::span<const double> alpha,
                                       std::size_t frames) {
  if (alpha.empty()) throw InvalidInputError("upsample_attention: empty alpha");
  if (frames % alpha.size() != 0) {
    throw InvalidInputError("upsample_attention: frame count " +
                            std::to_string(frames) +
                            " not divisible by slot count " +
                            std::to_string(alpha.size()));
  }
  double sum = 0.0;
  for (double a : alpha) sum += a;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInputError("upsample_attention: alpha must sum to 1");
  }
  const std::size_t repeat = frames / alpha.size();
  const double inv = 1.0 / static_cast<double>(repeat);
  std::vector<double> out(frames);
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    for (std::size_t r = 0; r < repeat; ++r) {
      out[t * repeat + r] = alpha[t] * inv;
    }
  }
  return out;
}

std::vector<double> fuse(const audio::MelSpectrogram& mel,
                         std::span<const double> alpha_frames, double gamma) {
  const std::size_t n = mel.values.cols;
  if (alpha_frames.size() != n) {
    throw InvalidInputError("fuse: attention frame count " +
                            std::to_string(alpha_frames.size()) +
                            " != mel frame count " + std::to_string(n));
  }
  if (gamma < 0.0 || gamma > 1.0) {
    throw InvalidConfigError("fuse: gamma must be in [0, 1]");
  }
  const std::vector<double> e_mean = audio::mean_energy(mel);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = gamma * alpha_frames[i] + (1.0 - gamma) * e_mean[i];
  }
  return out;
}

std::vector<double> highlight_scores(std::span<const double> e_tilde,
                                     std::span<const double> e_mean,
                                     std::size_t s_frames, double beta) {
  const std::size_t n = e_tilde.size();
  if (e_mean.size() != n) {
    throw InvalidInputError("highlight_scores: e_tilde/e_mean length mismatch");
  }
  if (s_frames == 0 || s_frames > n) {
    throw InvalidInputError("highlight_scores: window must be in [1, frames]");
  }
  if (beta < 0.0 || beta > 1.0) {
    throw InvalidConfigError("highlight_scores: beta must be in [0, 1]");
  }

  // Each window is summed afresh left-to-right; at these sizes the direct
  // evaluation is cheap and keeps the summation order bit-reproducible.
  std::vector<double> out(n - s_frames + 1);
  for (std::size_t start = 0; start < out.size(); ++start) {
    double acc = 0.0;
    for (std::size_t s = 0; s < s_frames; ++s) acc += e_tilde[start + s];
    double diff = 0.0;
    if (start >= 2) {
      const double d1 = e_mean[start] - e_mean[start - 1];
      const double d1_prev = e_mean[start - 1] - e_mean[start - 2];
      diff = d1 + (d1 - d1_prev);
    }
    out[start] = beta * acc + (1.0 - beta) * diff;
  }
  return out;
}

std::size_t highlight_frames(double frame_duration, double duration_s) {
  return static_cast<std::size_t>(std::llround(duration_s / frame_duration));
}

HighlightSpan select_highlight(std::span<const double> window_scores,
                               double frame_duration, double duration_s) {
  if (window_scores.empty()) {
    throw InvalidInputError("select_highlight: no candidate windows");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < window_scores.size(); ++i) {
    if (window_scores[i] > window_scores[best]) best = i;  // earliest wins ties
  }
  HighlightSpan span;
  span.start_s = static_cast<double>(best) * frame_duration;
  span.duration_s = duration_s;
  span.score = window_scores[best];
  return span;
}

HighlightSpan attention_fused_highlight(const audio::MelSpectrogram& mel,
                                        std::span<const double> alpha,
                                        double gamma, double beta,
                                        double duration_s) {
  const std::vector<double> alpha_frames =
      upsample_attention(alpha, mel.values.cols);
  const std::vector<double> e_tilde = fuse(mel, alpha_frames, gamma);
  const std::vector<double> e_mean = audio::mean_energy(mel);
  const std::size_t s_frames =
      highlight_frames(mel.frame_duration, duration_s);
  const std::vector<double> scores =
      highlight_scores(e_tilde, e_mean, s_frames, beta);
  return select_highlight(scores, mel.frame_duration, duration_s);
}

HighlightSpan energy_baseline(const audio::MelSpectrogram& mel, double beta,
                              double duration_s) {
  const std::vector<double> e_mean = audio::mean_energy(mel);
  const std::size_t s_frames =
      highlight_frames(mel.frame_duration, duration_s);
  const std::vector<double> scores =
      highlight_scores(e_mean, e_mean, s_frames, beta);
  return select_highlight(scores, mel.frame_duration, duration_s);
}

HighlightSpan f1m_baseline(double track_duration_s) {
  if (track_duration_s <= 0) {
    throw InvalidInputError("f1m_baseline: nonpositive track duration");
  }
  HighlightSpan span;
  span.start_s = 0.0;
  span.duration_s = std::min(60.0, track_duration_s);
  span.score = 0.0;
  return span;
}

HighlightSpan map_to_track_timeline(const HighlightSpan& span,
                                    double track_duration_s) {
  HighlightSpan out = span;
  if (span.start_s >= track_duration_s) {
    out.start_s =
        audio::map_canonical_to_source_s(span.start_s, track_duration_s);
  }
  return out;
}

}  // namespace cranhl::highlight
