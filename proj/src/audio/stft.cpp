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

#include <cmath>
#include <numbers>

#include "cranhl/audio/fft.hpp"
#include "cranhl/audio/frontend.hpp"
#include "cranhl/error.hpp"

namespace cranhl::audio {

SampleBuffer canonicalize(const SampleBuffer& buffer) {
  if (buffer.samples.empty()) {
    throw InvalidInputError("canonicalize: empty buffer");
  }
  if (buffer.sample_rate != kCanonicalRate) {
    throw InvalidInputError("canonicalize: buffer must be at canonical rate");
  }
  const std::size_t len = buffer.samples.size();
  SampleBuffer out;
  out.sample_rate = kCanonicalRate;
  out.samples.resize(kCanonicalSamples);

  if (len >= kCanonicalSamples) {
    std::copy_n(buffer.samples.begin(), kCanonicalSamples,
                out.samples.begin());
    return out;
  }
  std::copy(buffer.samples.begin(), buffer.samples.end(), out.samples.begin());
  // Tail alignment: index i maps to input[(i - kCanonicalSamples) mod len],
  // which makes out[kCanonicalSamples - 1] the track's final sample.
  const auto n = static_cast<std::ptrdiff_t>(len);
  const auto total = static_cast<std::ptrdiff_t>(kCanonicalSamples);
  for (std::ptrdiff_t i = n; i < total; ++i) {
    std::ptrdiff_t src = (i - total) % n;
    if (src < 0) src += n;
    out.samples[static_cast<std::size_t>(i)] =
        buffer.samples[static_cast<std::size_t>(src)];
  }
  return out;
}

double map_canonical_to_source_s(double canonical_s, double track_duration_s) {
  if (track_duration_s <= 0) {
    throw InvalidInputError("map_canonical_to_source_s: nonpositive duration");
  }
  if (canonical_s < track_duration_s) return canonical_s;
  double src = std::fmod(canonical_s - kCanonicalSeconds, track_duration_s);
  if (src < 0) src += track_duration_s;
  return src;
}

Mat stft_power(const SampleBuffer& buffer, std::size_t window_size,
               std::size_t hop) {
  if (buffer.samples.size() != kNumFrames * hop + (window_size - hop)) {
    throw InvalidInputError(
        "stft_power: expected the canonical sample count, got " +
        std::to_string(buffer.samples.size()));
  }
  const std::size_t n_bins = window_size / 2 + 1;

  std::vector<double> hann(window_size);
  for (std::size_t i = 0; i < window_size; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                   static_cast<double>(i) /
                                   static_cast<double>(window_size));
  }

  Fft fft(window_size);
  Mat out(n_bins, kNumFrames);
  std::vector<double> frame(window_size);
  std::vector<double> power(n_bins);
  for (std::size_t n = 0; n < kNumFrames; ++n) {
    const double* src = buffer.samples.data() + n * hop;
    for (std::size_t i = 0; i < window_size; ++i) frame[i] = src[i] * hann[i];
    fft.power_spectrum(frame.data(), power.data());
    for (std::size_t k = 0; k < n_bins; ++k) out.at(k, n) = power[k];
  }
  return out;
}

}  // namespace cranhl::audio
