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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "cranhl/audio/frontend.hpp"
#include "cranhl/audio/mel_cache.hpp"
#include "cranhl/audio/wav.hpp"
#include "cranhl/error.hpp"
#include "cranhl/rng.hpp"

using namespace cranhl;
using namespace cranhl::audio;

namespace {

SampleBuffer sine(double freq, double seconds, double rate,
                  double amplitude = 0.5) {
  SampleBuffer b;
  b.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  b.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq *
                                        static_cast<double>(i) / rate);
  }
  return b;
}

SampleBuffer noise(std::size_t n, double rate, std::uint64_t seed) {
  SampleBuffer b;
  b.sample_rate = rate;
  b.samples.resize(n);
  Rng rng(seed);
  for (double& s : b.samples) s = rng.uniform(-0.5, 0.5);
  return b;
}

// Banded brute-force DFT magnitude over bins [0, k_max].
std::vector<double> dft_band(const std::vector<double>& x, std::size_t k_max) {
  std::vector<double> mag(k_max + 1);
  const std::size_t n = x.size();
  for (std::size_t k = 0; k <= k_max; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(i) / static_cast<double>(n);
      re += x[i] * std::cos(ang);
      im += x[i] * std::sin(ang);
    }
    mag[k] = std::hypot(re, im);
  }
  return mag;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cranhl_audio_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("resample: equal rates return the buffer unchanged") {
  SampleBuffer b = sine(100.0, 0.25, kCanonicalRate);
  SampleBuffer out = resample(b, kCanonicalRate);
  CHECK(out.sample_rate == b.sample_rate);
  CHECK(out.samples == b.samples);
}

TEST_CASE("resample: output length follows duration") {
  SampleBuffer b = sine(200.0, 2.0, 16744.0);
  REQUIRE(b.samples.size() == 33488);
  SampleBuffer out = resample(b, 8372.0);
  CHECK(out.samples.size() == 16744);
  CHECK(out.sample_rate == 8372.0);
}

TEST_CASE("resample: 100 Hz sine keeps its dominant DFT bin at 44100 -> 8372") {
  SampleBuffer in = sine(100.0, 1.0, 44100.0);
  // One-second signals put frequency f in bin f.
  CHECK(oracle::argmax(dft_band(in.samples, 500)) == 100);

  SampleBuffer out = resample(in, 8372.0);
  REQUIRE(out.samples.size() == 8372);
  const std::vector<double> mag = oracle::dft_magnitude(out.samples);
  CHECK(oracle::argmax(mag) == 100);
}

TEST_CASE("resample: empty buffer and bad rates are rejected") {
  SampleBuffer empty;
  empty.sample_rate = 44100.0;
  CHECK_THROWS_AS(resample(empty, 8372.0), InvalidInputError);
  SampleBuffer b = sine(100.0, 0.1, 44100.0);
  CHECK_THROWS_AS(resample(b, 0.0), InvalidInputError);
}

TEST_CASE("canonicalize: long input keeps its first canonical window") {
  SampleBuffer b = noise(static_cast<std::size_t>(300.0 * kCanonicalRate),
                         kCanonicalRate, 11);
  SampleBuffer out = canonicalize(b);
  REQUIRE(out.samples.size() == kCanonicalSamples);
  for (std::size_t i : {std::size_t{0}, std::size_t{12345},
                        kCanonicalSamples - 1}) {
    CHECK(out.samples[i] == b.samples[i]);
  }
}

TEST_CASE("canonicalize: short input wraps so the tail is the track's tail") {
  const auto len = static_cast<std::size_t>(200.0 * kCanonicalRate);
  SampleBuffer b = noise(len, kCanonicalRate, 12);
  SampleBuffer out = canonicalize(b);
  REQUIRE(out.samples.size() == kCanonicalSamples);
  for (std::size_t i = 0; i < len; ++i) {
    REQUIRE(out.samples[i] == b.samples[i]);
  }
  const std::size_t missing = kCanonicalSamples - len;
  for (std::size_t j = 0; j < missing; ++j) {
    REQUIRE(out.samples[len + j] == b.samples[len - missing + j]);
  }
  CHECK(out.samples.back() == b.samples.back());
}

TEST_CASE("canonicalize: very short input tiles cyclically, tail aligned") {
  const auto len = static_cast<std::size_t>(30.0 * kCanonicalRate);
  SampleBuffer b = noise(len, kCanonicalRate, 13);
  SampleBuffer out = canonicalize(b);
  REQUIRE(out.samples.size() == kCanonicalSamples);
  // The output's last len samples are exactly the input.
  for (std::size_t j = 0; j < len; ++j) {
    REQUIRE(out.samples[kCanonicalSamples - len + j] == b.samples[j]);
  }
}

TEST_CASE("canonicalize: exact-length input is unchanged") {
  SampleBuffer b = noise(kCanonicalSamples, kCanonicalRate, 14);
  SampleBuffer out = canonicalize(b);
  CHECK(out.samples == b.samples);
}

TEST_CASE("canonicalize: empty input and wrong rate are rejected") {
  SampleBuffer empty;
  empty.sample_rate = kCanonicalRate;
  CHECK_THROWS_AS(canonicalize(empty), InvalidInputError);
  SampleBuffer wrong = sine(100.0, 1.0, 44100.0);
  CHECK_THROWS_AS(canonicalize(wrong), InvalidInputError);
}

TEST_CASE("map_canonical_to_source_s: prefix is identity, tail wraps back") {
  CHECK(map_canonical_to_source_s(120.0, 200.0) == 120.0);
  const double mapped = map_canonical_to_source_s(230.0, 200.0);
  CHECK(mapped == doctest::Approx(230.0 - (kCanonicalSeconds - 200.0)));
  CHECK(mapped < 200.0);
}

TEST_CASE("stft_power: zero input gives a zero spectrogram") {
  SampleBuffer b;
  b.sample_rate = kCanonicalRate;
  b.samples.assign(kCanonicalSamples, 0.0);
  Mat spec = stft_power(b);
  REQUIRE(spec.rows == kNumBins);
  REQUIRE(spec.cols == kNumFrames);
  for (double v : spec.v) REQUIRE(v == 0.0);
}

TEST_CASE("stft_power: constant input concentrates energy in bin 0") {
  SampleBuffer b;
  b.sample_rate = kCanonicalRate;
  b.samples.assign(kCanonicalSamples, 1.0);
  Mat spec = stft_power(b);
  for (std::size_t n = 0; n < kNumFrames; n += 37) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < kNumBins; ++k) {
      if (spec.at(k, n) > spec.at(best, n)) best = k;
    }
    REQUIRE(best == 0);
  }
}

TEST_CASE("stft_power: C6 tone peaks at bin 128, frame matches a brute DFT") {
  const double freq = 1046.5;
  SampleBuffer b = sine(freq, kCanonicalSeconds + 0.1, kCanonicalRate);
  b.samples.resize(kCanonicalSamples);
  Mat spec = stft_power(b);

  const auto expected_bin = static_cast<std::size_t>(
      std::lround(freq * 1024.0 / kCanonicalRate));
  REQUIRE(expected_bin == 128);
  for (std::size_t n = 0; n < kNumFrames; n += 97) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < kNumBins; ++k) {
      if (spec.at(k, n) > spec.at(best, n)) best = k;
    }
    REQUIRE(best == expected_bin);
  }

  // Full column check against a windowed O(n^2) DFT of frame 100.
  const std::size_t frame = 100;
  std::vector<double> windowed(kFftSize);
  for (std::size_t i = 0; i < kFftSize; ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(kFftSize));
    windowed[i] = b.samples[frame * kHop + i] * hann;
  }
  const std::vector<double> mag = oracle::dft_magnitude(windowed);
  for (std::size_t k = 0; k < kNumBins; ++k) {
    REQUIRE(spec.at(k, frame) ==
            doctest::Approx(mag[k] * mag[k]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("stft_power: wrong input length is rejected") {
  SampleBuffer b = noise(1000, kCanonicalRate, 5);
  CHECK_THROWS_AS(stft_power(b), InvalidInputError);
}

TEST_CASE("mel filterbank: rows are non-degenerate and centers increase") {
  MelFilterbank bank;
  Mat m = bank.matrix();
  REQUIRE(m.rows == kNumMels);
  REQUIRE(m.cols == kNumBins);
  for (std::size_t j = 0; j < kNumMels; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < kNumBins; ++k) {
      REQUIRE(m.at(j, k) >= 0.0);
      sum += m.at(j, k);
    }
    REQUIRE(sum > 0.0);
  }
  const auto& centers = bank.center_frequencies();
  for (std::size_t j = 1; j < centers.size(); ++j) {
    REQUIRE(centers[j] > centers[j - 1]);
  }
}

TEST_CASE("mel filterbank: the HTK mel map round-trips") {
  for (double hz : {55.0, 440.0, 1046.5, 4000.0}) {
    CHECK(MelFilterbank::mel_to_hz(MelFilterbank::hz_to_mel(hz)) ==
          doctest::Approx(hz).epsilon(1e-12));
  }
  CHECK(MelFilterbank::hz_to_mel(700.0) ==
        doctest::Approx(2595.0 * std::log10(2.0)));
}

TEST_CASE("mel filterbank: too many bands for the fft size is rejected") {
  CHECK_THROWS_AS(MelFilterbank(2000, kNumBins, kCanonicalRate),
                  InvalidConfigError);
}

TEST_CASE("mel filterbank: a tone at bin 64's center lights up row 64") {
  MelFilterbank bank;
  const double freq = bank.center_frequencies()[64];
  SampleBuffer b = sine(freq, kCanonicalSeconds + 0.1, kCanonicalRate);
  b.samples.resize(kCanonicalSamples);
  MelSpectrogram mel = mel_spectrogram(b);
  for (std::size_t n = 0; n < kNumFrames; n += 53) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < kNumMels; ++j) {
      if (mel.values.at(j, n) > mel.values.at(best, n)) best = j;
    }
    REQUIRE(best == 64);
  }
}

TEST_CASE("mel_spectrogram: silence maps to all zeros, shape fixed") {
  SampleBuffer b;
  b.sample_rate = kCanonicalRate;
  b.samples.assign(static_cast<std::size_t>(60.0 * kCanonicalRate), 0.0);
  MelSpectrogram mel = mel_spectrogram(b);
  REQUIRE(mel.values.rows == kNumMels);
  REQUIRE(mel.values.cols == kNumFrames);
  CHECK(mel.frame_duration == doctest::Approx(512.0 / 8372.0));
  for (double v : mel.values.v) REQUIRE(v == 0.0);
}

TEST_CASE("mel_spectrogram: seeded noise gives positive energy everywhere") {
  SampleBuffer b =
      noise(static_cast<std::size_t>(90.0 * kCanonicalRate), kCanonicalRate, 77);
  MelSpectrogram mel = mel_spectrogram(b);
  for (std::size_t n = 0; n < kNumFrames; ++n) {
    double col = 0.0;
    for (std::size_t j = 0; j < kNumMels; ++j) col += mel.values.at(j, n);
    REQUIRE(col > 0.0);
  }
}

TEST_CASE("mel_spectrogram: non-canonical rate is rejected") {
  SampleBuffer b = sine(100.0, 2.0, 44100.0);
  CHECK_THROWS_AS(mel_spectrogram(b), InvalidInputError);
}

TEST_CASE("normalize_max: peak becomes one; silence stays zero") {
  MelSpectrogram mel;
  mel.values = Mat(2, 3);
  mel.values.at(0, 1) = 4.0;
  mel.values.at(1, 2) = 2.0;
  MelSpectrogram out = normalize_max(mel);
  CHECK(out.values.at(0, 1) == 1.0);
  CHECK(out.values.at(1, 2) == 0.5);
  MelSpectrogram zero;
  zero.values = Mat(2, 3);
  MelSpectrogram zout = normalize_max(zero);
  for (double v : zout.values.v) CHECK(v == 0.0);
}

TEST_CASE("wav: pcm16 round-trip within quantization error") {
  SampleBuffer b = sine(440.0, 0.5, kCanonicalRate, 0.8);
  const auto path = temp_dir() / "tone.wav";
  write_wav_pcm16(path, b);
  SampleBuffer back = read_wav(path);
  REQUIRE(back.sample_rate == b.sample_rate);
  REQUIRE(back.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    REQUIRE(std::abs(back.samples[i] - b.samples[i]) <= 1.0 / 32768.0);
  }
  WavInfo info = read_wav_info(path);
  CHECK(info.frames == b.samples.size());
  CHECK(info.channels == 1);
  CHECK(info.duration_s() == doctest::Approx(0.5));
}

TEST_CASE("wav: stereo is averaged to mono") {
  // Hand-built stereo PCM16 file: L = 0.5, R = -0.5 everywhere.
  const auto path = temp_dir() / "stereo.wav";
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    auto u16 = [&](std::uint16_t v) {
      char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
      os.write(b, 2);
    };
    auto u32 = [&](std::uint32_t v) {
      char b[4];
      for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
      os.write(b, 4);
    };
    const std::uint32_t frames = 64;
    os.write("RIFF", 4);
    u32(36 + frames * 4);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    u32(16);
    u16(1);
    u16(2);
    u32(8000);
    u32(8000 * 4);
    u16(4);
    u16(16);
    os.write("data", 4);
    u32(frames * 4);
    for (std::uint32_t i = 0; i < frames; ++i) {
      u16(static_cast<std::uint16_t>(16384));   // left +0.5
      u16(static_cast<std::uint16_t>(-16384));  // right -0.5
    }
  }
  SampleBuffer b = read_wav(path);
  REQUIRE(b.samples.size() == 64);
  for (double s : b.samples) REQUIRE(s == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("wav: float32 files decode") {
  const auto path = temp_dir() / "f32.wav";
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    auto u16 = [&](std::uint16_t v) {
      char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
      os.write(b, 2);
    };
    auto u32 = [&](std::uint32_t v) {
      char b[4];
      for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
      os.write(b, 4);
    };
    const std::uint32_t frames = 16;
    os.write("RIFF", 4);
    u32(36 + frames * 4);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    u32(16);
    u16(3);  // IEEE float
    u16(1);
    u32(8372);
    u32(8372 * 4);
    u16(4);
    u16(32);
    os.write("data", 4);
    u32(frames * 4);
    for (std::uint32_t i = 0; i < frames; ++i) {
      const float v = 0.25f;
      u32(std::bit_cast<std::uint32_t>(v));
    }
  }
  SampleBuffer b = read_wav(path);
  REQUIRE(b.samples.size() == 16);
  for (double s : b.samples) REQUIRE(s == doctest::Approx(0.25));
}

TEST_CASE("wav: truncated and non-wav files are rejected") {
  const auto dir = temp_dir();
  const auto garbage = dir / "garbage.wav";
  {
    std::ofstream os(garbage, std::ios::binary | std::ios::trunc);
    os << "this is not audio";
  }
  CHECK_THROWS_AS(read_wav(garbage), IoError);

  SampleBuffer b = sine(440.0, 0.1, kCanonicalRate);
  const auto good = dir / "good.wav";
  write_wav_pcm16(good, b);
  const auto truncated = dir / "truncated.wav";
  {
    std::ifstream is(good, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() / 2);
    std::ofstream os(truncated, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_wav(truncated), CorruptFileError);
}

TEST_CASE("mel cache: exact float32 round-trip") {
  MelSpectrogram mel;
  mel.values = Mat(kNumMels, 8);
  Rng rng(3);
  for (double& v : mel.values.v) {
    v = static_cast<double>(static_cast<float>(rng.uniform(0.0, 10.0)));
  }
  const auto path = temp_dir() / "cache.mels";
  save_mel_cache(path, mel);
  MelSpectrogram back = load_mel_cache(path);
  REQUIRE(back.values.rows == mel.values.rows);
  REQUIRE(back.values.cols == mel.values.cols);
  CHECK(back.frame_duration == mel.frame_duration);
  for (std::size_t i = 0; i < mel.values.v.size(); ++i) {
    REQUIRE(back.values.v[i] == mel.values.v[i]);
  }
}

TEST_CASE("mel cache: corruption is detected") {
  MelSpectrogram mel;
  mel.values = Mat(4, 4);
  const auto dir = temp_dir();
  const auto path = dir / "trunc.mels";
  save_mel_cache(path, mel);
  std::ifstream is(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  is.close();
  bytes.resize(bytes.size() - 9);
  const auto bad = dir / "trunc2.mels";
  std::ofstream os(bad, std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  os.close();
  CHECK_THROWS_AS(load_mel_cache(bad), CorruptFileError);

  const auto wrong = dir / "magic.mels";
  std::ofstream ws(wrong, std::ios::binary | std::ios::trunc);
  ws << "NOPE" << std::string(64, '\0');
  ws.close();
  CHECK_THROWS_AS(load_mel_cache(wrong), CorruptFileError);
}
