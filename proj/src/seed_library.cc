// Copyright 2026 The Audiorel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "audiorel/seed_library.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "audiorel/errors.h"
#include "audiorel/random.h"

namespace audiorel {

std::vector<SeedClip> SliceRecording(const SeedRecording& recording,
                                     uint64_t slice_seed) {
  Rng rng = MakeRng({slice_seed, static_cast<uint64_t>(recording.class_id),
                     static_cast<uint64_t>(recording.source_id)});
  std::vector<SeedClip> clips;
  const int64_t total = static_cast<int64_t>(recording.samples.size());
  int64_t pos = 0;
  while (total - pos >= kMinSliceSamples) {
    const int64_t want = UniformInt(rng, kMinSliceSamples, kMaxSliceSamples);
    const int64_t len = std::min(want, total - pos);
    SeedClip clip;
    clip.class_id = recording.class_id;
    clip.ref = {recording.source_id, static_cast<int>(clips.size())};
    clip.offset = pos;
    clip.samples.assign(recording.samples.begin() + pos,
                        recording.samples.begin() + pos + len);
    clips.push_back(std::move(clip));
    pos += len;
  }
  return clips;
}

SeedLibrary::SeedLibrary(std::vector<SeedRecording> recordings,
                         uint64_t slice_seed)
    : slice_seed_(slice_seed) {
  std::sort(recordings.begin(), recordings.end(),
            [](const auto& a, const auto& b) {
              return std::pair(a.class_id, a.source_id) <
                     std::pair(b.class_id, b.source_id);
            });
  int num_classes = 0;
  for (const auto& r : recordings) {
    if (r.class_id < 0) throw ValidationError("negative seed class id");
    num_classes = std::max(num_classes, r.class_id + 1);
  }
  class_begin_.assign(num_classes + 1, 0);
  for (int c = 0; c < num_classes; ++c) {
    class_begin_[c] = clips_.size();
    for (const auto& r : recordings) {
      if (r.class_id != c) continue;
      auto slices = SliceRecording(r, slice_seed);
      for (auto& s : slices) clips_.push_back(std::move(s));
    }
    if (clips_.size() == class_begin_[c]) {
      throw ValidationError("seed library has no clip of at least 1 s for class " +
                            std::to_string(c));
    }
  }
  class_begin_[num_classes] = clips_.size();
}

SeedLibrary SeedLibrary::LoadDirectory(const std::filesystem::path& dir,
                                       uint64_t slice_seed, int num_classes) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("seed-audio directory " + dir.string() +
                      " does not exist");
  }
  std::vector<SeedRecording> recordings;
  for (int c = 0; c < num_classes; ++c) {
    bool any = false;
    for (int s = 0; s < kSourcesPerClass; ++s) {
      const auto path = dir / SeedFileName(c, s);
      if (!std::filesystem::exists(path)) continue;
      Audio audio = ReadWav(path);
      if (audio.sample_rate != kSampleRate) {
        throw ValidationError(path.string() + ": seed audio must be 16 kHz");
      }
      recordings.push_back({c, s, std::move(audio.samples)});
      any = true;
    }
    if (!any) {
      throw ValidationError("seed-audio directory " + dir.string() +
                            " has no recording for class " + std::to_string(c) +
                            " (expected " + SeedFileName(c, 0) + ")");
    }
  }
  return SeedLibrary(std::move(recordings), slice_seed);
}

std::span<const SeedClip> SeedLibrary::ClipsFor(int class_id) const {
  if (class_id < 0 || class_id >= num_classes()) {
    throw ValidationError("seed library has no class " +
                          std::to_string(class_id));
  }
  return std::span<const SeedClip>(clips_).subspan(
      class_begin_[class_id], class_begin_[class_id + 1] - class_begin_[class_id]);
}

const SeedClip& SeedLibrary::Clip(int class_id, const ClipRef& ref) const {
  for (const auto& clip : ClipsFor(class_id)) {
    if (clip.ref == ref) return clip;
  }
  throw ValidationError("unresolvable clip reference: class " +
                        std::to_string(class_id) + " source " +
                        std::to_string(ref.source_id) + " slice " +
                        std::to_string(ref.slice_index));
}

std::string SeedFileName(int class_id, int source_id) {
  char name[32];
  std::snprintf(name, sizeof(name), "c%02d_s%d.wav", class_id, source_id);
  return name;
}

SeedRecording SynthesizeSeedRecording(int class_id, int source_id,
                                      double seconds, uint64_t seed) {
  constexpr double kSlotHz = 280.0;
  constexpr double kLowestCentreHz = 250.0;
  constexpr double kBandHalfWidthHz = 60.0;
  constexpr int kBandPartials = 6;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  Rng rng = MakeRng({seed, 0x5eedULL, static_cast<uint64_t>(class_id),
                     static_cast<uint64_t>(source_id)});
  const double centre =
      kLowestCentreHz + kSlotHz * class_id + 12.0 * (source_id - 2);

  // Oscillators advance by complex rotation; cheaper than sin() per sample.
  struct Osc {
    std::complex<double> phase;
    std::complex<double> step;
    double amplitude;
  };
  std::vector<Osc> oscs;
  auto add = [&](double hz, double amplitude) {
    oscs.push_back({std::polar(1.0, UniformReal(rng, 0.0, kTwoPi)),
                    std::polar(1.0, kTwoPi * hz / kSampleRate), amplitude});
  };
  for (int k = 0; k < kBandPartials; ++k) {
    add(centre + UniformReal(rng, -kBandHalfWidthHz, kBandHalfWidthHz),
        0.25 / std::sqrt(static_cast<double>(kBandPartials)));
  }
  add(centre + 100.0, 0.2);

  const double mod_hz = 1.5 + 0.3 * (class_id % 7) + 0.1 * source_id;
  const double mod_phase = UniformReal(rng, 0.0, kTwoPi);
  const int64_t n = static_cast<int64_t>(std::llround(seconds * kSampleRate));
  SeedRecording rec{class_id, source_id, std::vector<float>(n)};
  for (int64_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (auto& o : oscs) {
      v += o.amplitude * o.phase.imag();
      o.phase *= o.step;
    }
    if ((i & 1023) == 1023) {
      for (auto& o : oscs) o.phase /= std::abs(o.phase);
    }
    const double t = static_cast<double>(i) / kSampleRate;
    const double envelope = 0.7 + 0.3 * std::sin(kTwoPi * mod_hz * t + mod_phase);
    rec.samples[i] = static_cast<float>(v * envelope);
  }
  return rec;
}

void WriteSyntheticSeedDirectory(const std::filesystem::path& dir,
                                 uint64_t seed, double seconds,
                                 int num_classes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (int c = 0; c < num_classes; ++c) {
    for (int s = 0; s < kSourcesPerClass; ++s) {
      const SeedRecording rec = SynthesizeSeedRecording(c, s, seconds, seed);
      WriteWav(dir / SeedFileName(c, s), rec.samples);
    }
  }
}

}  // namespace audiorel
