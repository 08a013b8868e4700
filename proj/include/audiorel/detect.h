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

#ifndef AUDIOREL_DETECT_H_
#define AUDIOREL_DETECT_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "audiorel/corpus.h"
#include "audiorel/grid.h"
#include "audiorel/seed_library.h"
#include "audiorel/synth.h"

namespace audiorel {

struct DetectedEvent {
  int label = 0;  // AudioEventClass id
  double confidence = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;

  double duration() const { return t2 - t1; }
  friend bool operator==(const DetectedEvent&, const DetectedEvent&) = default;
};

struct EventSet {
  std::string scene_id;
  std::vector<DetectedEvent> events;  // by t1, then confidence descending

  friend bool operator==(const EventSet&, const EventSet&) = default;
};

void SortEvents(std::vector<DetectedEvent>& events);

// Empty string when the event obeys the grid/duration/range invariants.
std::string CheckDetectedEvent(const DetectedEvent& event);

// One confidence-1 event per placement, snapped outward to the 0.5 s grid.
EventSet OracleDetect(const SceneManifest& manifest);

// Keeps events with confidence >= threshold, preserving order.
EventSet ThresholdFilter(const EventSet& events, double threshold);

struct TemplateParams {
  int frame = 1024;
  int hop = 512;
  double ncc_threshold = 0.5;
};

// Confidence map: kGridCells x num_classes, row-major by cell.
struct ConfidenceMap {
  int num_classes = 0;
  std::vector<double> values;

  double at(int cell, int label) const { return values[cell * num_classes + label]; }
};

// Scores every STFT frame against per-slice templates (mean log-magnitude
// spectra) by normalized cross-correlation, keeps the best template per
// class, and averages frames within each 0.5 s cell. Silent frames score 0,
// so a cell's confidence also reflects how much of it the event covers.
// Detect is const and safe to call concurrently.
class TemplateDetector {
 public:
  TemplateDetector(const SeedLibrary& library, TemplateParams params = {});

  ConfidenceMap Confidences(std::span<const float> waveform) const;
  EventSet Detect(std::span<const float> waveform,
                  std::string scene_id = {}) const;

  const TemplateParams& params() const { return params_; }
  int num_templates() const { return static_cast<int>(template_labels_.size()); }

 private:
  // Log-magnitude spectrum per hop; row f covers samples [f*hop, f*hop+frame).
  Eigen::MatrixXd FrameSpectra(std::span<const float> samples) const;

  TemplateParams params_;
  int num_classes_;
  std::vector<double> window_;
  Eigen::MatrixXd templates_;  // one zero-mean, unit-norm row per slice
  std::vector<int> template_labels_;
};

// Normalized cross-correlation (Pearson) of two equal-length vectors; 0 when
// either has zero variance.
double NormalizedCrossCorrelation(std::span<const double> a,
                                  std::span<const double> b);

// Detections interchange: JSON Lines, one record per scene:
//   {"scene_id": "...", "events": [{"label": "dog barking",
//     "confidence": 0.93, "t1": 1.5, "t2": 3.0}, ...]}
std::string FormatEventSet(const EventSet& set, const Corpus& corpus);
std::vector<EventSet> ParseEvents(std::string_view text, const Corpus& corpus);
void WriteEvents(std::span<const EventSet> sets, const Corpus& corpus,
                 const std::filesystem::path& path);
std::vector<EventSet> ReadEvents(const std::filesystem::path& path,
                                 const Corpus& corpus);

}  // namespace audiorel

#endif  // AUDIOREL_DETECT_H_
