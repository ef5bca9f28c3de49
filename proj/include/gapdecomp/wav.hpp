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

#ifndef GAPDECOMP_WAV_HPP_
#define GAPDECOMP_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gapdecomp {

struct AudioClip {
  std::vector<std::int16_t> samples;
  int sample_rate = 0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Only 16-bit PCM mono WAV is accepted; anything else is rejected so the
// byte-level I/O stays exact. Unknown RIFF chunks are skipped.
AudioClip read_wav(const std::filesystem::path& path);

// Canonical 44-byte header + little-endian samples; re-reading reproduces
// the clip bit for bit.
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace gapdecomp

#endif  // GAPDECOMP_WAV_HPP_
