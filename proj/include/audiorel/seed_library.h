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

#ifndef AUDIOREL_SEED_LIBRARY_H_
#define AUDIOREL_SEED_LIBRARY_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "audiorel/wav_io.h"

namespace audiorel {

inline constexpr int kSourcesPerClass = 5;
inline constexpr int64_t kMinSliceSamples = 1 * kSampleRate;
inline constexpr int64_t kMaxSliceSamples = 5 * kSampleRate;

// One exemplar recording of an event class before slicing.
struct SeedRecording {
  int class_id = 0;
  int source_id = 0;
  std::vector<float> samples;
};

struct ClipRef {
  int source_id = 0;
  int slice_index = 0;

  friend bool operator==(const ClipRef&, const ClipRef&) = default;
};

// A 1..5 s non-overlapping slice of a seed recording.
struct SeedClip {
  int class_id = 0;
  ClipRef ref;
  int64_t offset = 0;  // position inside the source recording
  std::vector<float> samples;

  double Duration() const {
    return static_cast<double>(samples.size()) / kSampleRate;
  }
};

// Cuts a recording into consecutive slices whose lengths are drawn uniformly
// from [1, 5] s; a tail shorter than 1 s is dropped.
std::vector<SeedClip> SliceRecording(const SeedRecording& recording,
                                     uint64_t slice_seed);

// Immutable after construction.
class SeedLibrary {
 public:
  SeedLibrary(std::vector<SeedRecording> recordings, uint64_t slice_seed);

  // Loads c<class>_s<source>.wav files (16 kHz mono 16-bit). Every class in
  // 0..num_classes-1 needs at least one recording.
  static SeedLibrary LoadDirectory(const std::filesystem::path& dir,
                                   uint64_t slice_seed = 0,
                                   int num_classes = 25);

  std::span<const SeedClip> ClipsFor(int class_id) const;
  // Throws ValidationError for an unresolvable reference.
  const SeedClip& Clip(int class_id, const ClipRef& ref) const;
  const std::vector<SeedClip>& clips() const { return clips_; }
  int num_classes() const { return static_cast<int>(class_begin_.size()) - 1; }
  uint64_t slice_seed() const { return slice_seed_; }

 private:
  std::vector<SeedClip> clips_;      // grouped by class, then source, slice
  std::vector<size_t> class_begin_;  // clips_ range per class
  uint64_t slice_seed_;
};

std::string SeedFileName(int class_id, int source_id);

// Deterministic stand-in recording for a class: a narrow noise band plus a
// tone inside a class-specific 280 Hz frequency slot, slowly amplitude
// modulated. Source ids shift the slot centre and modulation slightly.
SeedRecording SynthesizeSeedRecording(int class_id, int source_id,
                                      double seconds, uint64_t seed);

// Writes num_classes x kSourcesPerClass procedural recordings into dir.
void WriteSyntheticSeedDirectory(const std::filesystem::path& dir,
                                 uint64_t seed = 0, double seconds = 14.0,
                                 int num_classes = 25);

}  // namespace audiorel

#endif  // AUDIOREL_SEED_LIBRARY_H_
