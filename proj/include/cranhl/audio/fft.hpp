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

#include <complex>
#include <cstddef>
#include <vector>

namespace cranhl::audio {

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// Sizes must be powers of two; the STFT only ever needs one size, so the
// plan is built once and reused across frames.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place forward transform of n_ complex points.
  void transform(std::vector<std::complex<double>>& a) const;

  // Squared magnitudes of the first n/2+1 bins of the real input frame.
  // out must have n/2+1 slots.
  void power_spectrum(const double* frame, double* out) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
  mutable std::vector<std::complex<double>> work_;
};

}  // namespace cranhl::audio
