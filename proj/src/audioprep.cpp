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

#include "gapdecomp/audioprep.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gapdecomp/errors.hpp"
#include "gapdecomp/rng.hpp"

namespace gapdecomp {

namespace {

// Seconds-to-samples conversions tolerate sub-nanosecond noise from the
// double product so that exact-seconds inputs land on exact sample counts.
std::size_t round_samples(double seconds, int rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

std::size_t ceil_samples(double seconds, int rate) {
  return static_cast<std::size_t>(std::ceil(seconds * rate - 1e-9));
}

double frame_rms(const std::vector<std::int16_t>& samples, std::size_t begin,
                 std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double v = static_cast<double>(samples[i]);
    acc += v * v;
  }
  return std::sqrt(acc / static_cast<double>(end - begin));
}

void check_clip(const AudioClip& clip, const char* op) {
  if (clip.sample_rate <= 0) {
    throw ContractError(std::string(op) + ": sample rate must be positive");
  }
  if (clip.samples.empty()) {
    throw ContractError(std::string(op) + ": empty clip");
  }
}

}  // namespace

AudioClip trim_silence(const AudioClip& clip, const TrimConfig& cfg) {
  check_clip(clip, "trim_silence");
  if (!(cfg.frame_ms > 0.0)) {
    throw ContractError("trim_silence: frame_ms must be positive");
  }
  if (!(cfg.threshold_db < 0.0)) {
    throw ContractError("trim_silence: threshold_db must be negative");
  }

  const std::size_t frame_len =
      std::max<std::size_t>(1, round_samples(cfg.frame_ms / 1000.0, clip.sample_rate));
  const std::size_t n = clip.samples.size();
  const std::size_t n_frames = (n + frame_len - 1) / frame_len;

  std::vector<double> rms(n_frames);
  double peak = 0.0;
  std::size_t peak_frame = 0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t begin = f * frame_len;
    const std::size_t end = std::min(n, begin + frame_len);
    rms[f] = frame_rms(clip.samples, begin, end);
    if (rms[f] > peak) {
      peak = rms[f];
      peak_frame = f;
    }
  }

  const double gate = peak * std::pow(10.0, cfg.threshold_db / 20.0);
  std::size_t first = 0;
  while (first < n_frames && rms[first] <= gate) ++first;

  if (first == n_frames) {
    // everything silent (all-zero audio): keep the loudest frame, earliest
    // frame on ties
    const std::size_t begin = peak_frame * frame_len;
    const std::size_t end = std::min(n, begin + frame_len);
    return {{clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
             clip.samples.begin() + static_cast<std::ptrdiff_t>(end)},
            clip.sample_rate};
  }

  std::size_t last = n_frames - 1;
  while (last > first && rms[last] <= gate) --last;

  const std::size_t begin = first * frame_len;
  const std::size_t end = std::min(n, (last + 1) * frame_len);
  return {{clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
           clip.samples.begin() + static_cast<std::ptrdiff_t>(end)},
          clip.sample_rate};
}

AudioClip truncate_random(const AudioClip& clip, double target_s,
                          std::uint64_t seed) {
  check_clip(clip, "truncate_random");
  if (!(target_s > 0.0)) {
    throw ContractError("truncate_random: target duration must be positive");
  }
  const std::size_t target_len = round_samples(target_s, clip.sample_rate);
  const std::size_t n = clip.samples.size();
  if (n <= target_len || target_len == 0) return clip;

  Rng rng(seed);
  const std::size_t offset =
      static_cast<std::size_t>(rng.uniform_index(n - target_len + 1));
  return {{clip.samples.begin() + static_cast<std::ptrdiff_t>(offset),
           clip.samples.begin() + static_cast<std::ptrdiff_t>(offset + target_len)},
          clip.sample_rate};
}

AudioClip tile_to_min(const AudioClip& clip, double min_s) {
  check_clip(clip, "tile_to_min");
  if (!(min_s > 0.0)) {
    throw ContractError("tile_to_min: minimum duration must be positive");
  }
  const std::size_t min_len = ceil_samples(min_s, clip.sample_rate);
  const std::size_t n = clip.samples.size();
  if (n >= min_len) return clip;

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.reserve(min_len);
  for (std::size_t i = 0; i < min_len; ++i) {
    out.samples.push_back(clip.samples[i % n]);
  }
  return out;
}

Manifest degrade_set(const Manifest& manifest, const DegradeSpec& spec,
                     const TrimConfig& trim,
                     const std::filesystem::path& out_dir) {
  if (!(spec.target_duration_s > 0.0)) {
    throw ContractError("degrade: target duration must be positive");
  }
  if (spec.min_duration_s && *spec.min_duration_s < spec.target_duration_s) {
    throw ContractError("degrade: minimum duration must be >= target duration");
  }
  std::filesystem::create_directories(out_dir);

  const std::string tag = manifest.domain_tag() + "-degraded";
  std::vector<UtteranceRecord> out_records;
  out_records.reserve(manifest.size());
  for (const UtteranceRecord& rec : manifest.records()) {
    if (rec.path == "-") {
      throw ContractError("degrade: record '" + rec.id + "' has no audio path");
    }
    if (rec.id.find('/') != std::string::npos ||
        rec.id.find('\\') != std::string::npos) {
      throw ContractError("degrade: record id '" + rec.id +
                          "' is not usable as a file name");
    }
    AudioClip clip;
    try {
      clip = read_wav(rec.path);
    } catch (const ContractError& e) {
      throw ContractError("degrade: record '" + rec.id + "': " + e.what());
    }
    clip = trim_silence(clip, trim);
    clip = truncate_random(clip, spec.target_duration_s,
                           derive_seed(spec.seed, rec.id));
    if (spec.min_duration_s) {
      clip = tile_to_min(clip, *spec.min_duration_s);
    }
    const std::filesystem::path out_path = out_dir / (rec.id + ".wav");
    write_wav(clip, out_path);
    out_records.push_back(
        UtteranceRecord{rec.id, out_path.string(), rec.label, tag});
  }
  return Manifest(std::move(out_records), tag);
}

}  // namespace gapdecomp
