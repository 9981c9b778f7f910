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

#include <filesystem>

#include "cranhl/audio/sample_buffer.hpp"

namespace cranhl::audio {

struct WavInfo {
  double sample_rate = 0.0;
  std::size_t frames = 0;
  unsigned channels = 0;

  double duration_s() const {
    return static_cast<double>(frames) / sample_rate;
  }
};

// Reads a RIFF/WAVE file. Accepts PCM 16-bit and IEEE float 32-bit, mono or
// stereo; stereo is averaged down to mono. Anything else raises IoError.
SampleBuffer read_wav(const std::filesystem::path& path);

// Header-only parse; does not decode samples.
WavInfo read_wav_info(const std::filesystem::path& path);

// Writes mono PCM 16-bit. Samples are clamped to [-1, 1] before quantizing.
void write_wav_pcm16(const std::filesystem::path& path,
                     const SampleBuffer& buffer);

}  // namespace cranhl::audio
