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

#ifndef GAPDECOMP_AUDIOPREP_HPP_
#define GAPDECOMP_AUDIOPREP_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "gapdecomp/manifest.hpp"
#include "gapdecomp/wav.hpp"

namespace gapdecomp {

// Frame-RMS silence gate for leading/trailing trim. A frame is silent when
// its RMS is at or below the loudest frame's RMS plus threshold_db (so a
// -40 dB threshold keeps frames within 40 dB of the peak frame).
struct TrimConfig {
  double frame_ms = 25.0;
  double threshold_db = -40.0;
};

struct DegradeSpec {
  double target_duration_s = 0.25;
  std::optional<double> min_duration_s;  // tile-to-minimum, off by default
  std::uint64_t seed = 0;
};

// Removes maximal leading and trailing runs of silent frames; interior
// samples are untouched. If every frame is silent (all-zero audio) the
// single loudest frame is returned, so the result is never empty.
AudioClip trim_silence(const AudioClip& clip, const TrimConfig& cfg = {});

// Contiguous segment of exactly round(target_s * sample_rate) samples at an
// offset drawn uniformly from the valid range with mt19937_64(seed) via the
// documented modulo rule; clips no longer than the target pass through
// unchanged. Deterministic per (clip, seed).
AudioClip truncate_random(const AudioClip& clip, double target_s,
                          std::uint64_t seed);

// Repeats the clip and cuts to exactly ceil(min_s * sample_rate) samples;
// clips already long enough pass through unchanged. The output always starts
// with the original clip sample for sample.
AudioClip tile_to_min(const AudioClip& clip, double min_s);

// trim -> truncate -> (optionally) tile for every record, writing
// <out_dir>/<id>.wav. Per-record truncation seeds come from
// derive_seed(spec.seed, id), so the result is independent of record order.
// Returns the rewritten manifest with domain tag "<tag>-degraded".
Manifest degrade_set(const Manifest& manifest, const DegradeSpec& spec,
                     const TrimConfig& trim,
                     const std::filesystem::path& out_dir);

}  // namespace gapdecomp

#endif  // GAPDECOMP_AUDIOPREP_HPP_
