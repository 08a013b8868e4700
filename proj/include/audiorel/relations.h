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

#ifndef AUDIOREL_RELATIONS_H_
#define AUDIOREL_RELATIONS_H_

#include <optional>
#include <span>
#include <vector>

#include "audiorel/corpus.h"
#include "audiorel/detect.h"

namespace audiorel {

struct RelationParams {
  double sigma1 = 0.2;  // loudness reduction ratio for closefirst/farfirst
  double sigma2 = 0.4;  // equal-distance tolerance, relative to the louder
  double overlap_fraction = 0.5;
  double order_tolerance = 0.25;  // seconds

  void Validate() const;
};

// L2 norm of the samples in [t1, t2) seconds. Throws on an empty span or one
// outside [0, 10] s.
double Loudness(std::span<const float> waveform, double t1, double t2);

struct RelationVerdict {
  bool holds = false;
  std::vector<DetectedEvent> witness;  // matched tuple, in role order
};

// Target class conventions (prompt order):
//   before/after/simultaneity/and/or: {A, B}
//   closefirst/farfirst/equaldist:    {A} or {A, A}
//   count: the n named classes; not: {forbidden}; ifthenelse: {A, B, C}
// A tuple never uses the same detected event twice. Candidates per role are
// tried in (confidence desc, t1 asc) order, so the witness is deterministic.
// Spatial relations require the waveform (ConfigError otherwise).
RelationVerdict CheckRelation(SubRelation relation,
                              std::span<const DetectedEvent> detected,
                              std::span<const int> target_classes,
                              const RelationParams& params,
                              std::optional<std::span<const float>> waveform = {});

}  // namespace audiorel

#endif  // AUDIOREL_RELATIONS_H_
