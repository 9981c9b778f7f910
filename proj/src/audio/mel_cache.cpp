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

#include "cranhl/audio/mel_cache.hpp"

#include <cmath>
#include <fstream>

#include "cranhl/binio.hpp"
#include "cranhl/error.hpp"

namespace cranhl::audio {

namespace {
constexpr char kMagic[4] = {'M', 'E', 'L', 'S'};
}

void save_mel_cache(const std::filesystem::path& path,
                    const MelSpectrogram& mel) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("mel cache: cannot write: " + path.string());
  binio::write_bytes(os, kMagic, 4);
  binio::write_u32(os, kMelCacheVersion);
  binio::write_u32(os, static_cast<std::uint32_t>(mel.values.rows));
  binio::write_u32(os, static_cast<std::uint32_t>(mel.values.cols));
  binio::write_f64(os, mel.frame_duration);
  for (double v : mel.values.v) {
    binio::write_f32(os, static_cast<float>(v));
  }
  if (!os) throw IoError("mel cache: write failed: " + path.string());
}

MelSpectrogram load_mel_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("mel cache: cannot open: " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::string_view(magic, 4) != "MELS") {
    throw CorruptFileError("mel cache: bad magic: " + path.string());
  }
  const std::uint32_t version = binio::read_u32(is, "version");
  if (version != kMelCacheVersion) {
    throw VersionError("mel cache: unsupported version " +
                       std::to_string(version) + ": " + path.string());
  }
  const std::uint32_t rows = binio::read_u32(is, "rows");
  const std::uint32_t cols = binio::read_u32(is, "cols");
  if (rows == 0 || cols == 0 || rows > 1 << 16 || cols > 1 << 24) {
    throw CorruptFileError("mel cache: implausible shape: " + path.string());
  }
  MelSpectrogram mel;
  mel.frame_duration = binio::read_f64(is, "frame duration");
  mel.values = Mat(rows, cols);
  for (double& v : mel.values.v) {
    v = static_cast<double>(binio::read_f32(is, "values"));
    if (!std::isfinite(v) || v < 0.0) {
      throw CorruptFileError("mel cache: invalid energy value: " +
                             path.string());
    }
  }
  return mel;
}

}  // namespace cranhl::audio
