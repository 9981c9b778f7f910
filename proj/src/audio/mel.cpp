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

#include <algorithm>
#include <cmath>

#include "cranhl/audio/frontend.hpp"
#include "cranhl/error.hpp"

namespace cranhl::audio {

double MelFilterbank::hz_to_mel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double MelFilterbank::mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(std::size_t n_mels, std::size_t n_fft_bins,
                             double sample_rate)
    : n_mels_(n_mels), n_fft_bins_(n_fft_bins), sample_rate_(sample_rate) {
  if (n_mels < 1) throw InvalidConfigError("mel: n_mels must be >= 1");
  if (n_fft_bins < 2) throw InvalidConfigError("mel: need at least 2 fft bins");
  if (sample_rate <= 0) throw InvalidConfigError("mel: bad sample rate");

  // Filter j is a triangle over mel edge points [p_j, p_{j+2}] peaking at
  // p_{j+1}; the points are equally spaced on the mel scale over [0, sr/2].
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges_hz(n_mels + 2);
  for (std::size_t j = 0; j < n_mels + 2; ++j) {
    edges_hz[j] = mel_to_hz(mel_max * static_cast<double>(j) /
                            static_cast<double>(n_mels + 1));
  }
  centers_.assign(edges_hz.begin() + 1, edges_hz.end() - 1);

  const double hz_per_bin = sample_rate / 2.0 / static_cast<double>(n_fft_bins - 1);
  start_.resize(n_mels);
  weights_.resize(n_mels);
  for (std::size_t j = 0; j < n_mels; ++j) {
    const double lo = edges_hz[j], mid = edges_hz[j + 1], hi = edges_hz[j + 2];
    const auto k_lo = static_cast<std::size_t>(std::ceil(lo / hz_per_bin));
    const auto k_hi = std::min(
        n_fft_bins - 1, static_cast<std::size_t>(std::floor(hi / hz_per_bin)));
    std::vector<double> w;
    std::size_t first = k_lo;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const double f = static_cast<double>(k) * hz_per_bin;
      double value = 0.0;
      if (f <= mid) {
        value = (mid > lo) ? (f - lo) / (mid - lo) : 0.0;
      } else {
        value = (hi > mid) ? (hi - f) / (hi - mid) : 0.0;
      }
      if (value > 0.0) {
        if (w.empty()) first = k;
        w.push_back(value);
      } else if (!w.empty()) {
        break;  // support is contiguous
      }
    }
    if (w.empty()) {
      throw InvalidConfigError(
          "mel: filter " + std::to_string(j) +
          " covers no fft bin; too many mel bands for this fft size");
    }
    start_[j] = first;
    weights_[j] = std::move(w);
  }
}

Mat MelFilterbank::matrix() const {
  Mat m(n_mels_, n_fft_bins_);
  for (std::size_t j = 0; j < n_mels_; ++j) {
    for (std::size_t i = 0; i < weights_[j].size(); ++i) {
      m.at(j, start_[j] + i) = weights_[j][i];
    }
  }
  return m;
}

Mat MelFilterbank::apply(const Mat& power) const {
  if (power.rows != n_fft_bins_) {
    throw InvalidShapeError("mel: power spectrogram has wrong bin count");
  }
  Mat out(n_mels_, power.cols);
  for (std::size_t j = 0; j < n_mels_; ++j) {
    const std::size_t k0 = start_[j];
    const auto& w = weights_[j];
    for (std::size_t n = 0; n < power.cols; ++n) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * power.at(k0 + i, n);
      }
      out.at(j, n) = acc;
    }
  }
  return out;
}

MelSpectrogram mel_spectrogram(const SampleBuffer& buffer) {
  if (buffer.sample_rate != kCanonicalRate) {
    throw InvalidInputError(
        "mel_spectrogram: buffer must be resampled to the canonical rate");
  }
  static const MelFilterbank bank;  // canonical geometry, immutable
  const SampleBuffer canonical = canonicalize(buffer);
  const Mat power = stft_power(canonical);
  MelSpectrogram mel;
  mel.values = bank.apply(power);
  mel.frame_duration = kFrameDuration;
  for (double v : mel.values.v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ContractViolation("mel_spectrogram: non-finite or negative energy");
    }
  }
  return mel;
}

MelSpectrogram normalize_max(const MelSpectrogram& mel) {
  MelSpectrogram out = mel;
  const double peak = *std::max_element(out.values.v.begin(),
                                        out.values.v.end());
  if (peak > 0.0) {
    for (double& v : out.values.v) v /= peak;
  }
  return out;
}

std::vector<double> mean_energy(const MelSpectrogram& mel) {
  const std::size_t rows = mel.values.rows, cols = mel.values.cols;
  std::vector<double> out(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = mel.values.row(r);
    for (std::size_t c = 0; c < cols; ++c) out[c] += row[c];
  }
  for (double& v : out) v /= static_cast<double>(rows);
  return out;
}

}  // namespace cranhl::audio
