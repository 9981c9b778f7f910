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

#include "cranhl/audio/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "cranhl/binio.hpp"
#include "cranhl/error.hpp"

namespace cranhl::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

std::uint16_t read_u16(std::istream& is, const char* what) {
  unsigned char b[2];
  if (!is.read(reinterpret_cast<char*>(b), 2)) {
    throw CorruptFileError(std::string("wav: truncated while reading ") + what);
  }
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u16(std::ostream& os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

// Walks the RIFF chunk list until the data chunk; fills fmt on the way.
// Returns the byte length of the data chunk, leaving the stream at its start.
std::uint32_t seek_data(std::istream& is, const std::filesystem::path& path,
                        FmtChunk& fmt) {
  char tag[4];
  if (!is.read(tag, 4) || std::string_view(tag, 4) != "RIFF") {
    throw IoError("wav: not a RIFF file: " + path.string());
  }
  binio::read_u32(is, "riff size");
  if (!is.read(tag, 4) || std::string_view(tag, 4) != "WAVE") {
    throw IoError("wav: not a WAVE file: " + path.string());
  }
  bool have_fmt = false;
  while (is.read(tag, 4)) {
    std::uint32_t size = binio::read_u32(is, "chunk size");
    std::string_view id(tag, 4);
    if (id == "fmt ") {
      fmt.format = read_u16(is, "format");
      fmt.channels = read_u16(is, "channels");
      fmt.sample_rate = binio::read_u32(is, "sample rate");
      binio::read_u32(is, "byte rate");
      read_u16(is, "block align");
      fmt.bits = read_u16(is, "bits");
      if (size > 16) {
        if (fmt.format == kFormatExtensible && size >= 24) {
          read_u16(is, "ext size");
          read_u16(is, "valid bits");
          binio::read_u32(is, "channel mask");
          fmt.format = read_u16(is, "sub format");
          is.seekg(size - 26, std::ios::cur);
        } else {
          is.seekg(size - 16, std::ios::cur);
        }
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) {
        throw CorruptFileError("wav: data chunk before fmt: " + path.string());
      }
      return size;
    } else {
      // Chunks are word-aligned.
      is.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw CorruptFileError("wav: no data chunk: " + path.string());
}

void validate_fmt(const FmtChunk& fmt, const std::filesystem::path& path) {
  if (fmt.channels != 1 && fmt.channels != 2) {
    throw IoError("wav: unsupported channel count " +
                  std::to_string(fmt.channels) + ": " + path.string());
  }
  if (fmt.sample_rate == 0) {
    throw CorruptFileError("wav: zero sample rate: " + path.string());
  }
  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool f32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !f32) {
    throw IoError("wav: only PCM16 and float32 supported (format " +
                  std::to_string(fmt.format) + ", " + std::to_string(fmt.bits) +
                  " bits): " + path.string());
  }
}

}  // namespace

SampleBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("wav: cannot open: " + path.string());
  FmtChunk fmt;
  std::uint32_t data_size = seek_data(is, path, fmt);
  validate_fmt(fmt, path);

  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = data_size / frame_bytes;

  std::vector<char> raw(data_size);
  if (!is.read(raw.data(), static_cast<std::streamsize>(data_size))) {
    throw CorruptFileError("wav: truncated data chunk: " + path.string());
  }

  SampleBuffer out;
  out.sample_rate = static_cast<double>(fmt.sample_rate);
  out.samples.resize(frames);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (unsigned c = 0; c < fmt.channels; ++c) {
      const unsigned char* s = p + f * frame_bytes + c * bytes_per_sample;
      if (fmt.bits == 16) {
        auto u = static_cast<std::uint16_t>(s[0] | (s[1] << 8));
        acc += static_cast<std::int16_t>(u) / 32768.0;
      } else {
        std::uint32_t u = static_cast<std::uint32_t>(s[0]) |
                          (static_cast<std::uint32_t>(s[1]) << 8) |
                          (static_cast<std::uint32_t>(s[2]) << 16) |
                          (static_cast<std::uint32_t>(s[3]) << 24);
        acc += static_cast<double>(std::bit_cast<float>(u));
      }
    }
    out.samples[f] = acc / fmt.channels;
  }
  for (double s : out.samples) {
    if (!std::isfinite(s)) {
      throw CorruptFileError("wav: non-finite sample: " + path.string());
    }
  }
  return out;
}

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("wav: cannot open: " + path.string());
  FmtChunk fmt;
  std::uint32_t data_size = seek_data(is, path, fmt);
  validate_fmt(fmt, path);
  WavInfo info;
  info.sample_rate = static_cast<double>(fmt.sample_rate);
  info.channels = fmt.channels;
  info.frames = data_size / (fmt.bits / 8 * fmt.channels);
  return info;
}

void write_wav_pcm16(const std::filesystem::path& path,
                     const SampleBuffer& buffer) {
  if (buffer.sample_rate <= 0) {
    throw InvalidInputError("wav: sample rate must be positive");
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("wav: cannot write: " + path.string());

  const auto n = static_cast<std::uint32_t>(buffer.samples.size());
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate);
  const std::uint32_t data_size = n * 2;

  os.write("RIFF", 4);
  binio::write_u32(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  binio::write_u32(os, 16);
  write_u16(os, kFormatPcm);
  write_u16(os, 1);  // mono
  binio::write_u32(os, rate);
  binio::write_u32(os, rate * 2);
  write_u16(os, 2);
  write_u16(os, 16);
  os.write("data", 4);
  binio::write_u32(os, data_size);
  for (double s : buffer.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const long q = std::clamp(std::lround(c * 32768.0), -32768L, 32767L);
    write_u16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  if (!os) throw IoError("wav: write failed: " + path.string());
}

}  // namespace cranhl::audio
