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

#include <cstddef>
#include <vector>

namespace cranhl::audio {

// Canonical front-end geometry. Every track is reduced to a fixed-length
// window at kCanonicalRate and then to a kNumMels x kNumFrames energy grid.
inline constexpr double kCanonicalRate = 8372.0;  // Hz
inline constexpr std::size_t kFftSize = 1024;
inline constexpr std::size_t kHop = 512;
inline constexpr std::size_t kNumFrames = 4000;
inline constexpr std::size_t kNumBins = kFftSize / 2 + 1;  // 513
inline constexpr std::size_t kNumMels = 128;

// Samples needed so that frame n starts at n*kHop and the last frame still
// has a full window: kNumFrames*kHop + (kFftSize - kHop) = 2,048,512.
inline constexpr std::size_t kCanonicalSamples =
    kNumFrames * kHop + (kFftSize - kHop);

inline constexpr double kFrameDuration =
    static_cast<double>(kHop) / kCanonicalRate;  // ~61.2 ms

inline constexpr double kCanonicalSeconds =
    static_cast<double>(kCanonicalSamples) / kCanonicalRate;

// Mono audio with its sample rate. Samples are nominally in [-1, 1].
struct SampleBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Row-major rows x cols grid of doubles.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  double* row(std::size_t r) { return v.data() + r * cols; }
  const double* row(std::size_t r) const { return v.data() + r * cols; }
};

// Mel-band energy grid for one track plus the wall-clock length of a frame.
struct MelSpectrogram {
  Mat values;  // kNumMels x kNumFrames, entries >= 0
  double frame_duration = kFrameDuration;
};

}  // namespace cranhl::audio
