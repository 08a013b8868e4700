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

#ifndef AUDIOREL_METRICS_H_
#define AUDIOREL_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "audiorel/corpus.h"
#include "audiorel/detect.h"
#include "audiorel/relations.h"
#include "audiorel/synth.h"

namespace audiorel {

struct MsrConfig {
  double w_s = 0.1;
  std::vector<double> thresholds = {0.5, 0.6, 0.7, 0.8};

  void Validate() const;
};

struct MsrScores {
  double presence = 0.0;   // f_p in [0, 1]
  double relation = 0.0;   // f_r in {0, 1}
  double parsimony = 0.0;  // f_s in (0, 1]

  double product() const { return presence * relation * parsimony; }
};

// What a scene is scored against. For or / ifthenelse `classes` and
// `num_events` come from one chosen reference alternative.
struct GroundTruth {
  SubRelation relation = SubRelation::kBefore;
  std::vector<int> targets;  // passed to CheckRelation
  std::vector<int> classes;  // E_g labels, one per ground-truth event
  int num_events = 0;        // n(E_g)
  std::optional<int> forbidden_class;
};

GroundTruth GroundTruthFor(const SceneManifest& manifest, int reference = 0);

// Fraction of ground-truth classes present among the detections. With no
// ground-truth events (not) it is 1 when the forbidden class is absent, else 0.
double PresenceScore(const EventSet& detected, const GroundTruth& truth);

// 1 iff every ground-truth class is present and CheckRelation holds.
int RelationScore(const EventSet& detected, const GroundTruth& truth,
                  const RelationParams& params,
                  std::optional<std::span<const float>> waveform = {});

// exp(-w_s * |n_detected - n_truth|).
double ParsimonyScore(int num_detected, int num_truth, double w_s);

MsrScores ScoreScene(const EventSet& detected, const GroundTruth& truth,
                     const MsrConfig& config, const RelationParams& params,
                     std::optional<std::span<const float>> waveform = {});

// Index of the reference with the smallest sample-domain L2 distance; ties go
// to the lowest index. Throws ValidationError on length mismatch.
int SelectReference(std::span<const float> generated,
                    std::span<const std::vector<float>> references);

struct SceneInput {
  SceneManifest manifest;
  EventSet detections;  // unfiltered
  bool detections_missing = false;
  std::vector<float> waveform;  // generated audio; empty when unavailable
  std::vector<std::vector<float>> reference_waveforms;
};

// Picks the or / ifthenelse alternative to score against: by waveform
// distance when audio is available, else by label overlap (ties -> first).
int ChooseReference(const SceneInput& scene, const EventSet& filtered);

struct ThresholdResult {
  double threshold = 0.0;
  double presence = 0.0;
  double relation = 0.0;
  double parsimony = 0.0;
  double amsr = 0.0;
  std::vector<MsrScores> per_scene;
  std::vector<int> reference;  // chosen alternative per scene, -1 if none
};

ThresholdResult Amsr(std::span<const SceneInput> scenes, double threshold,
                     const MsrConfig& config, const RelationParams& params);

struct StageMeans {
  int scenes = 0;
  double presence = 0.0;
  double relation = 0.0;
  double parsimony = 0.0;
  double msr = 0.0;
};

struct GeneralMetrics {
  std::optional<double> fad;
  std::optional<double> fd;
  std::optional<double> kl;
  bool kl_floored = false;
};

struct EvalReport {
  int num_scenes = 0;  // N
  MsrConfig config;    // K = config.thresholds.size()
  RelationParams params;
  StageMeans overall;
  std::map<SubRelation, StageMeans> by_sub_relation;  // only groups with scenes
  std::map<MainRelation, StageMeans> by_main_relation;
  std::vector<ThresholdResult> per_threshold;
  std::vector<std::string> scene_ids;
  std::vector<SubRelation> scene_relations;
  std::vector<std::string> missing_detections;
  GeneralMetrics general;
  std::vector<std::string> notes;
};

// Averages every stage over scenes and thresholds, overall and broken down
// by sub-relation and main relation.
EvalReport Mamsr(std::span<const SceneInput> scenes, const MsrConfig& config,
                 const RelationParams& params);

}  // namespace audiorel

#endif  // AUDIOREL_METRICS_H_
