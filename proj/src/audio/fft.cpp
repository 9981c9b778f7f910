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

#include "cranhl/audio/fft.hpp"

#include <cmath>
#include <numbers>

#include "cranhl/error.hpp"

namespace cranhl::audio {

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw InvalidConfigError("fft: size must be a power of two");
  }
  bitrev_.resize(n);
  std::size_t log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n; ++b) {
      r |= ((i >> b) & 1) << (log2n - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
  work_.resize(n);
}

void Fft::transform(std::vector<std::complex<double>>& a) const {
  if (a.size() != n_) throw InvalidShapeError("fft: wrong input length");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n_ / len;
    for (std::size_t base = 0; base < n_; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = twiddle_[k * stride];
        const std::complex<double> u = a[base + k];
        const std::complex<double> t = w * a[base + k + half];
        a[base + k] = u + t;
        a[base + k + half] = u - t;
      }
    }
  }
}

void Fft::power_spectrum(const double* frame, double* out) const {
  for (std::size_t i = 0; i < n_; ++i) work_[i] = {frame[i], 0.0};
  transform(work_);
  for (std::size_t k = 0; k <= n_ / 2; ++k) {
    out[k] = std::norm(work_[k]);
  }
}

}  // namespace cranhl::audio
