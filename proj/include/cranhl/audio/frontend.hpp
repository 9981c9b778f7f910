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

#include <vector>

#include "cranhl/audio/sample_buffer.hpp"

namespace cranhl::audio {

// Band-limited sample-rate conversion with a 64-tap windowed-sinc kernel.
// Duration is preserved to within one sample period; equal rates return the
// input unchanged.
SampleBuffer resample(const SampleBuffer& buffer, double target_rate);

// Fixes the buffer to exactly kCanonicalSamples at the canonical rate:
// longer inputs are truncated, shorter ones get the missing tail filled by
// cyclically wrapping the input so that the output ends exactly where the
// track ends. After wrapping, output index i >= len holds
// input[(i - kCanonicalSamples) mod len], so the output's last len samples
// are the input itself.
SampleBuffer canonicalize(const SampleBuffer& buffer);

// Maps a time position on the canonical window back to the source track.
// Positions inside the wrap-filled tail of a short track land near the
// track's end; positions in the verbatim prefix are unchanged.
double map_canonical_to_source_s(double canonical_s, double track_duration_s);

// Squared-magnitude Hann-window STFT: kNumBins x kNumFrames, frame n
// starting at sample n*hop. The input must be exactly kCanonicalSamples.
Mat stft_power(const SampleBuffer& buffer, std::size_t window_size = kFftSize,
               std::size_t hop = kHop);

// HTK-style triangular mel filterbank.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t n_mels = kNumMels, std::size_t n_fft_bins = kNumBins,
                double sample_rate = kCanonicalRate);

  // Dense n_mels x n_fft_bins matrix of filter weights.
  Mat matrix() const;

  // filterbank * power, computed over each row's non-zero support.
  Mat apply(const Mat& power) const;

  const std::vector<double>& center_frequencies() const { return centers_; }
  std::size_t n_mels() const { return n_mels_; }

  static double hz_to_mel(double hz);
  static double mel_to_hz(double mel);

 private:
  std::size_t n_mels_;
  std::size_t n_fft_bins_;
  double sample_rate_;
  std::vector<double> centers_;
  // Per filter: first touched fft bin and the weights over its support.
  std::vector<std::size_t> start_;
  std::vector<std::vector<double>> weights_;
};

// Full front end: canonicalize -> stft_power -> mel filterbank.
// The buffer must already be at the canonical rate.
MelSpectrogram mel_spectrogram(const SampleBuffer& buffer);

// Copy of the grid scaled so the maximum entry is 1 (no-op for all-zero
// input). Applied before the model and before score fusion.
MelSpectrogram normalize_max(const MelSpectrogram& mel);

// Column means: per-frame average energy across mel bands.
std::vector<double> mean_energy(const MelSpectrogram& mel);

}  // namespace cranhl::audio
