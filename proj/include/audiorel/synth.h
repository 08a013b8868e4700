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

#ifndef AUDIOREL_SYNTH_H_
#define AUDIOREL_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "audiorel/corpus.h"
#include "audiorel/random.h"
#include "audiorel/seed_library.h"
#include "audiorel/wav_io.h"

namespace audiorel {

// Placement rules. None of these numbers come from recorded data; they are
// defaults chosen so every relation is realizable and detectable.
struct SynthParams {
  double gap_min_s = 0.3;
  double gap_max_s = 1.5;
  double overlap_fraction = 0.5;  // simultaneity, fraction of shorter clip
  double near_gain = 1.0;
  double far_gain_min = 0.3;
  double far_gain_max = 0.6;
  double sigma1 = 0.2;  // spatial margins the validator enforces
  double sigma2 = 0.4;
  int max_retries = 32;

  void Validate() const;
};

// A clip (prefix of a seed slice) placed into the scene.
struct EventPlacement {
  int class_id = 0;
  ClipRef clip;
  int64_t start_sample = 0;
  int64_t num_samples = 0;
  double gain = 1.0;

  int64_t end_sample() const { return start_sample + num_samples; }
  double start() const { return static_cast<double>(start_sample) / kSampleRate; }
  double end() const { return static_cast<double>(end_sample()) / kSampleRate; }
  double duration() const { return static_cast<double>(num_samples) / kSampleRate; }

  friend bool operator==(const EventPlacement&, const EventPlacement&) = default;
};

struct SceneManifest {
  std::string scene_id;
  SubRelation relation = SubRelation::kBefore;
  std::vector<int> event_classes;  // prompt order
  int template_index = 0;
  std::string prompt;
  std::vector<EventPlacement> placements;  // sorted by start
  // or / ifthenelse: index of the realized alternative in `references`.
  std::optional<int> branch;
  std::vector<std::vector<EventPlacement>> references;
  std::optional<int> forbidden_class;  // not
  std::string audio_path;              // relative to the dataset root
  std::vector<std::string> reference_paths;
  uint64_t rng_seed = 0;

  friend bool operator==(const SceneManifest&, const SceneManifest&) = default;
};

// Longest clip allowed when n events must fit sequentially into 10 s with the
// minimum gap: floor((10 - gap_min * (n - 1)) / n) seconds.
int64_t DurationCapSamples(int num_events, double gap_min_s);

// Draws event classes honouring the relation's arity and category constraint.
std::vector<int> SampleEventClasses(const Corpus& corpus, SubRelation relation,
                                    Rng& rng);

// Throws ValidationError on arity/category violations or when no feasible
// placement is found within params.max_retries draws.
SceneManifest PlanScene(const Corpus& corpus, SubRelation relation,
                        std::span<const int> event_classes,
                        const SeedLibrary& library, uint64_t rng_seed,
                        const SynthParams& params = {});

// Linear blend into kSceneSamples; rescaled to peak 0.9 only if peak > 1.
std::vector<float> RenderPlacements(std::span<const EventPlacement> placements,
                                    const SeedLibrary& library);
std::vector<float> RenderScene(const SceneManifest& manifest,
                               const SeedLibrary& library);

// Re-checks every construction rule from scratch. Empty result means valid.
std::vector<std::string> ValidateManifest(const SceneManifest& manifest,
                                          const Corpus& corpus,
                                          const SynthParams& params = {});

std::string ManifestToJson(const SceneManifest& manifest);
SceneManifest ManifestFromJson(std::string_view text);
void WriteManifest(const SceneManifest& manifest,
                   const std::filesystem::path& path);
SceneManifest ReadManifest(const std::filesystem::path& path);

struct DatasetOptions {
  int pairs_per_relation = 8;
  uint64_t rng_seed = 42;
  SynthParams synth;
};

// Writes audio/, references/, manifests/, prompts.tsv and index.json under
// out_dir and returns the manifests in index order.
std::vector<SceneManifest> GenDataset(const Corpus& corpus,
                                      const SeedLibrary& library,
                                      const DatasetOptions& options,
                                      const std::filesystem::path& out_dir);

// Reads the manifests listed in out_dir/index.json.
std::vector<SceneManifest> LoadDataset(const std::filesystem::path& dir);

}  // namespace audiorel

#endif  // AUDIOREL_SYNTH_H_
