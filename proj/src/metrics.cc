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

#include "audiorel/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "audiorel/errors.h"

namespace audiorel {
namespace {

bool HasLabel(const EventSet& set, int label) {
  return std::any_of(set.events.begin(), set.events.end(),
                     [&](const DetectedEvent& e) { return e.label == label; });
}

struct Accumulator {
  int n = 0;
  double presence = 0.0, relation = 0.0, parsimony = 0.0, msr = 0.0;

  void Add(const MsrScores& s) {
    ++n;
    presence += s.presence;
    relation += s.relation;
    parsimony += s.parsimony;
    msr += s.product();
  }
  void Add(const Accumulator& other) {
    n += other.n;
    presence += other.presence;
    relation += other.relation;
    parsimony += other.parsimony;
    msr += other.msr;
  }
  StageMeans Mean(int scenes) const {
    if (n == 0) return {scenes, 0, 0, 0, 0};
    return {scenes, presence / n, relation / n, parsimony / n, msr / n};
  }
};

}  // namespace

void MsrConfig::Validate() const {
  if (!(w_s > 0.0)) throw ConfigError("w_s must be positive");
  if (thresholds.empty()) throw ConfigError("threshold set is empty");
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
      throw ConfigError("thresholds must lie in [0, 1]");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw ConfigError("thresholds must be strictly increasing");
    }
  }
}

GroundTruth GroundTruthFor(const SceneManifest& manifest, int reference) {
  GroundTruth truth;
  truth.relation = manifest.relation;
  truth.targets = manifest.event_classes;
  truth.forbidden_class = manifest.forbidden_class;
  const std::vector<EventPlacement>* placements = &manifest.placements;
  if (!manifest.references.empty()) {
    if (reference < 0 || reference >= static_cast<int>(manifest.references.size())) {
      throw ValidationError("scene " + manifest.scene_id +
                            ": reference index out of range");
    }
    placements = &manifest.references[reference];
  }
  for (const auto& p : *placements) truth.classes.push_back(p.class_id);
  truth.num_events = static_cast<int>(placements->size());
  return truth;
}

double PresenceScore(const EventSet& detected, const GroundTruth& truth) {
  if (truth.classes.empty()) {
    if (!truth.forbidden_class) return 1.0;
    return HasLabel(detected, *truth.forbidden_class) ? 0.0 : 1.0;
  }
  int found = 0;
  for (int label : truth.classes) found += HasLabel(detected, label) ? 1 : 0;
  return static_cast<double>(found) / truth.classes.size();
}

int RelationScore(const EventSet& detected, const GroundTruth& truth,
                  const RelationParams& params,
                  std::optional<std::span<const float>> waveform) {
  for (int label : truth.classes) {
    if (!HasLabel(detected, label)) return 0;
  }
  std::vector<int> targets = truth.targets;
  if (truth.relation == SubRelation::kNot && truth.forbidden_class) {
    targets = {*truth.forbidden_class};
  }
  return CheckRelation(truth.relation, detected.events, targets, params, waveform)
                 .holds
             ? 1
             : 0;
}

double ParsimonyScore(int num_detected, int num_truth, double w_s) {
  return std::exp(-w_s * std::abs(num_detected - num_truth));
}

MsrScores ScoreScene(const EventSet& detected, const GroundTruth& truth,
                     const MsrConfig& config, const RelationParams& params,
                     std::optional<std::span<const float>> waveform) {
  MsrScores s;
  s.presence = PresenceScore(detected, truth);
  s.relation = RelationScore(detected, truth, params, waveform);
  s.parsimony = ParsimonyScore(static_cast<int>(detected.events.size()),
                               truth.num_events, config.w_s);
  return s;
}

int SelectReference(std::span<const float> generated,
                    std::span<const std::vector<float>> references) {
  if (references.empty()) throw ValidationError("no reference waveforms");
  int best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < references.size(); ++r) {
    if (references[r].size() != generated.size()) {
      throw ValidationError("reference " + std::to_string(r) +
                            " length differs from the generated audio");
    }
    double d = 0.0;
    for (size_t i = 0; i < generated.size(); ++i) {
      const double diff = static_cast<double>(generated[i]) - references[r][i];
      d += diff * diff;
    }
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<int>(r);
    }
  }
  return best;
}

int ChooseReference(const SceneInput& scene, const EventSet& filtered) {
  const auto& refs = scene.manifest.references;
  if (refs.empty()) return -1;
  if (!scene.waveform.empty() &&
      scene.reference_waveforms.size() == refs.size()) {
    return SelectReference(scene.waveform, scene.reference_waveforms);
  }
  int best = 0, best_overlap = -1;
  for (size_t r = 0; r < refs.size(); ++r) {
    int overlap = 0;
    for (const auto& p : refs[r]) overlap += HasLabel(filtered, p.class_id) ? 1 : 0;
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = static_cast<int>(r);
    }
  }
  return best;
}

ThresholdResult Amsr(std::span<const SceneInput> scenes, double threshold,
                     const MsrConfig& config, const RelationParams& params) {
  ThresholdResult result;
  result.threshold = threshold;
  Accumulator total;
  for (const auto& scene : scenes) {
    const EventSet filtered = ThresholdFilter(scene.detections, threshold);
    const int ref = ChooseReference(scene, filtered);
    const GroundTruth truth = GroundTruthFor(scene.manifest, std::max(ref, 0));
    std::optional<std::span<const float>> wave;
    if (!scene.waveform.empty()) wave = std::span<const float>(scene.waveform);
    const MsrScores s = ScoreScene(filtered, truth, config, params, wave);
    result.per_scene.push_back(s);
    result.reference.push_back(ref);
    total.Add(s);
  }
  const StageMeans mean = total.Mean(static_cast<int>(scenes.size()));
  result.presence = mean.presence;
  result.relation = mean.relation;
  result.parsimony = mean.parsimony;
  result.amsr = mean.msr;
  return result;
}

EvalReport Mamsr(std::span<const SceneInput> scenes, const MsrConfig& config,
                 const RelationParams& params) {
  config.Validate();
  params.Validate();
  EvalReport report;
  report.num_scenes = static_cast<int>(scenes.size());
  report.config = config;
  report.params = params;
  for (const auto& scene : scenes) {
    report.scene_ids.push_back(scene.manifest.scene_id);
    report.scene_relations.push_back(scene.manifest.relation);
    if (scene.detections_missing) {
      report.missing_detections.push_back(scene.manifest.scene_id);
    }
  }
  for (double s : config.thresholds) {
    report.per_threshold.push_back(Amsr(scenes, s, config, params));
  }

  // Sums over (scene, threshold) pairs; grouping is associative so the
  // breakdowns and the overall mean come from the same partial sums.
  std::map<SubRelation, Accumulator> by_sub;
  for (const auto& t : report.per_threshold) {
    for (size_t i = 0; i < scenes.size(); ++i) {
      by_sub[report.scene_relations[i]].Add(t.per_scene[i]);
    }
  }
  const int k = static_cast<int>(config.thresholds.size());
  std::map<MainRelation, Accumulator> by_main;
  Accumulator overall;
  for (SubRelation r : kAllSubRelations) {
    const Accumulator& acc = by_sub[r];
    if (acc.n == 0) continue;
    report.by_sub_relation[r] = acc.Mean(acc.n / k);
    by_main[CanonicalRelationSpec(r).main_relation].Add(acc);
    overall.Add(acc);
  }
  for (MainRelation m : kAllMainRelations) {
    if (by_main[m].n == 0) continue;
    report.by_main_relation[m] = by_main[m].Mean(by_main[m].n / k);
  }
  report.overall = overall.Mean(report.num_scenes);

  report.notes.push_back(
      "not: presence is 1 when the forbidden class is absent and 0 otherwise; "
      "n(E_g) = 0");
  report.notes.push_back(
      "MSR products are reported on a [0, 1] scale (multiply by 1e4 for "
      "basis-point tables)");
  return report;
}

}  // namespace audiorel
