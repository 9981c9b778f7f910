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

// On-disk spectrogram cache, one file per track:
//   magic "MELS", version u32, rows u32, cols u32, frame_duration f64,
//   then rows*cols float32 values row-major, little-endian.
inline constexpr std::uint32_t kMelCacheVersion = 1;

void save_mel_cache(const std::filesystem::path& path,
                    const MelSpectrogram& mel);

MelSpectrogram load_mel_cache(const std::filesystem::path& path);

}  // namespace cranhl::audio
