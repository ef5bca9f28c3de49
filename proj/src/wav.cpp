// Copyright 2026 The gapdecomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gapdecomp/wav.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <string>

#include "gapdecomp/errors.hpp"

namespace gapdecomp {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& why) {
  throw ContractError("wav file '" + path.string() + "': " + why);
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) fail(path, "cannot open");

  std::array<unsigned char, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size())) {
    fail(path, "truncated RIFF header");
  }
  if (std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
    fail(path, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  AudioClip clip;
  std::vector<unsigned char> data;
  bool have_data = false;

  std::array<unsigned char, 8> chunk{};
  while (in.read(reinterpret_cast<char*>(chunk.data()), chunk.size())) {
    const std::uint32_t chunk_size = read_u32(chunk.data() + 4);
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      if (chunk_size < 16) fail(path, "fmt chunk too short");
      std::vector<unsigned char> fmt(chunk_size);
      if (!in.read(reinterpret_cast<char*>(fmt.data()), chunk_size)) {
        fail(path, "truncated fmt chunk");
      }
      const std::uint16_t format = read_u16(fmt.data());
      const std::uint16_t channels = read_u16(fmt.data() + 2);
      const std::uint32_t rate = read_u32(fmt.data() + 4);
      const std::uint16_t bits = read_u16(fmt.data() + 14);
      if (format != 1) fail(path, "not PCM (format " + std::to_string(format) + ")");
      if (channels != 1) fail(path, "not mono (" + std::to_string(channels) + " channels)");
      if (bits != 16) fail(path, "not 16-bit (" + std::to_string(bits) + " bits)");
      if (rate == 0) fail(path, "zero sample rate");
      clip.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      if (!have_fmt) fail(path, "data chunk before fmt chunk");
      if (chunk_size % 2 != 0) fail(path, "odd data chunk size");
      data.resize(chunk_size);
      if (!in.read(reinterpret_cast<char*>(data.data()), chunk_size)) {
        fail(path, "truncated data chunk");
      }
      have_data = true;
      break;
    } else {
      // skip unknown chunk, honoring RIFF word alignment
      in.seekg(chunk_size + (chunk_size % 2), std::ios::cur);
      if (!in.good()) fail(path, "truncated chunk");
    }
  }
  if (!have_fmt || !have_data) fail(path, "missing fmt or data chunk");

  clip.samples.resize(data.size() / 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const auto lo = static_cast<std::uint16_t>(data[2 * i]);
    const auto hi = static_cast<std::uint16_t>(data[2 * i + 1]);
    clip.samples[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(lo | (hi << 8)));
  }
  return clip;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  if (clip.sample_rate <= 0) {
    throw ContractError("wav write: sample rate must be positive");
  }
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(clip.samples.size() * 2);

  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  out.append("data");
  put_u32(out, data_bytes);
  for (std::int16_t s : clip.samples) {
    const auto u = static_cast<std::uint16_t>(s);
    out.push_back(static_cast<char>(u & 0xFF));
    out.push_back(static_cast<char>((u >> 8) & 0xFF));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f.good()) {
    throw ContractError("cannot write wav file '" + path.string() + "'");
  }
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f.good()) {
    throw ContractError("write failed for wav file '" + path.string() + "'");
  }
}

}  // namespace gapdecomp
