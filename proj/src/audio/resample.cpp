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

#include "cranhl/audio/frontend.hpp"
#include "cranhl/error.hpp"

namespace cranhl::audio {

namespace {

constexpr int kTaps = 64;
constexpr int kHalf = kTaps / 2;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Blackman window over [-kHalf, kHalf].
double window(double d) {
  const double t = (d + kHalf) / kTaps;  // in [0, 1]
  return 0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * t) +
         0.08 * std::cos(4.0 * std::numbers::pi * t);
}

}  // namespace

SampleBuffer resample(const SampleBuffer& buffer, double target_rate) {
  if (buffer.samples.empty()) {
    throw InvalidInputError("resample: empty buffer");
  }
  if (buffer.sample_rate <= 0 || target_rate <= 0) {
    throw InvalidInputError("resample: sample rates must be positive");
  }
  if (buffer.sample_rate == target_rate) {
    return buffer;
  }

  const double ratio = target_rate / buffer.sample_rate;
  const auto in_len = static_cast<std::ptrdiff_t>(buffer.samples.size());
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(in_len) * ratio));

  // When downsampling, scale the sinc cutoff to the output Nyquist and
  // compensate the passband gain by the same factor.
  const double cutoff = std::min(1.0, ratio);

  SampleBuffer out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  const double* x = buffer.samples.data();

  for (std::size_t j = 0; j < out_len; ++j) {
    const double t = static_cast<double>(j) / ratio;  // source position
    const auto k0 = static_cast<std::ptrdiff_t>(std::floor(t)) - (kHalf - 1);
    double acc = 0.0;
    for (std::ptrdiff_t k = k0; k < k0 + kTaps; ++k) {
      if (k < 0 || k >= in_len) continue;
      const double d = static_cast<double>(k) - t;
      acc += x[k] * sinc(cutoff * d) * window(d);
    }
    out.samples[j] = acc * cutoff;
  }
  return out;
}

}  // namespace cranhl::audio
