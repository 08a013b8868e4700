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

#include "audiorel/relations.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "audiorel/errors.h"

namespace audiorel {
namespace {

std::vector<int> CandidatesFor(std::span<const DetectedEvent> events, int label) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(events.size()); ++i) {
    if (events[i].label == label) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    if (events[a].confidence != events[b].confidence) {
      return events[a].confidence > events[b].confidence;
    }
    return events[a].t1 < events[b].t1;
  });
  return out;
}

bool Before(const DetectedEvent& a, const DetectedEvent& b, double tolerance) {
  return a.t2 <= b.t1 + tolerance;
}

bool Simultaneous(const DetectedEvent& a, const DetectedEvent& b, double fraction) {
  const double overlap = std::min(a.t2, b.t2) - std::max(a.t1, b.t1);
  const double shorter = std::min(a.duration(), b.duration());
  return overlap >= fraction * shorter;
}

// First pair (i, j), i != j, from the two candidate lists satisfying pred.
template <typename Pred>
RelationVerdict FirstPair(std::span<const DetectedEvent> events,
                          const std::vector<int>& first,
                          const std::vector<int>& second, Pred pred) {
  for (int i : first) {
    for (int j : second) {
      if (i == j) continue;
      if (pred(i, j)) return {true, {events[i], events[j]}};
    }
  }
  return {};
}

int RequireTargets(SubRelation relation, std::span<const int> targets, size_t n) {
  if (targets.size() < n) {
    throw ValidationError("relation '" + std::string(SubRelationName(relation)) +
                          "' needs " + std::to_string(n) + " target classes");
  }
  return targets[0];
}

}  // namespace

void RelationParams::Validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in_unit(sigma1) || !in_unit(sigma2) || !in_unit(overlap_fraction)) {
    throw ConfigError("sigma1, sigma2 and overlap fraction must lie in (0, 1]");
  }
  if (!(order_tolerance >= 0.0)) {
    throw ConfigError("order tolerance must be non-negative");
  }
}

double Loudness(std::span<const float> waveform, double t1, double t2) {
  if (!(t1 >= 0.0 && t2 <= kSceneSeconds + 1e-9 && t2 > t1)) {
    throw ValidationError("loudness span must be non-empty and inside [0, 10] s");
  }
  const auto begin = static_cast<size_t>(std::llround(t1 * kSampleRate));
  const auto end = std::min(static_cast<size_t>(std::llround(t2 * kSampleRate)),
                            waveform.size());
  if (begin >= end) throw ValidationError("loudness span covers no samples");
  double sum = 0.0;
  for (size_t i = begin; i < end; ++i) {
    sum += static_cast<double>(waveform[i]) * waveform[i];
  }
  return std::sqrt(sum);
}

RelationVerdict CheckRelation(SubRelation relation,
                              std::span<const DetectedEvent> detected,
                              std::span<const int> targets,
                              const RelationParams& params,
                              std::optional<std::span<const float>> waveform) {
  switch (relation) {
    case SubRelation::kBefore:
    case SubRelation::kAfter: {
      RequireTargets(relation, targets, 2);
      // after(A, B) is before(B, A).
      const int first = relation == SubRelation::kBefore ? targets[0] : targets[1];
      const int second = relation == SubRelation::kBefore ? targets[1] : targets[0];
      RelationVerdict v = FirstPair(
          detected, CandidatesFor(detected, first), CandidatesFor(detected, second),
          [&](int i, int j) {
            return Before(detected[i], detected[j], params.order_tolerance);
          });
      if (v.holds && relation == SubRelation::kAfter) {
        std::swap(v.witness[0], v.witness[1]);
      }
      return v;
    }
    case SubRelation::kSimultaneity:
      RequireTargets(relation, targets, 2);
      return FirstPair(detected, CandidatesFor(detected, targets[0]),
                       CandidatesFor(detected, targets[1]), [&](int i, int j) {
                         return Simultaneous(detected[i], detected[j],
                                             params.overlap_fraction);
                       });
    case SubRelation::kCloseFirst:
    case SubRelation::kFarFirst:
    case SubRelation::kEqualDist: {
      const int label = RequireTargets(relation, targets, 1);
      if (!waveform) {
        throw ConfigError("spatial relation '" +
                          std::string(SubRelationName(relation)) +
                          "' needs the scene waveform");
      }
      const auto cands = CandidatesFor(detected, label);
      std::vector<double> loud(detected.size(), 0.0);
      for (int i : cands) {
        loud[i] = Loudness(*waveform, detected[i].t1, detected[i].t2);
      }
      const double margin = 1.0 + params.sigma1;
      return FirstPair(detected, cands, cands, [&](int i, int j) {
        const double li = loud[i], lj = loud[j];
        switch (relation) {
          case SubRelation::kCloseFirst:
            return detected[i].t1 < detected[j].t1 && li >= margin * lj;
          case SubRelation::kFarFirst:
            return detected[i].t1 < detected[j].t1 && lj >= margin * li;
          default:
            return std::abs(li - lj) <= params.sigma2 * std::max(li, lj);
        }
      });
    }
    case SubRelation::kCount:
    case SubRelation::kAnd: {
      RequireTargets(relation, targets, relation == SubRelation::kAnd ? 2 : 1);
      // Greedy choice is exact here: classes are matched independently, and a
      // repeated target class just needs as many distinct detections.
      RelationVerdict v{true, {}};
      std::vector<bool> used(detected.size(), false);
      for (int label : targets) {
        bool found = false;
        for (int i : CandidatesFor(detected, label)) {
          if (used[i]) continue;
          used[i] = found = true;
          v.witness.push_back(detected[i]);
          break;
        }
        if (!found) return {};
      }
      return v;
    }
    case SubRelation::kOr: {
      RequireTargets(relation, targets, 2);
      const auto a = CandidatesFor(detected, targets[0]);
      const auto b = CandidatesFor(detected, targets[1]);
      if (a.empty() == b.empty()) return {};
      return {true, {detected[a.empty() ? b[0] : a[0]]}};
    }
    case SubRelation::kNot: {
      RequireTargets(relation, targets, 1);
      return {CandidatesFor(detected, targets[0]).empty(), {}};
    }
    case SubRelation::kIfThenElse: {
      RequireTargets(relation, targets, 3);
      RelationVerdict then_branch = FirstPair(
          detected, CandidatesFor(detected, targets[0]),
          CandidatesFor(detected, targets[1]), [&](int i, int j) {
            return Before(detected[i], detected[j], params.order_tolerance);
          });
      const auto a = CandidatesFor(detected, targets[0]);
      const auto b = CandidatesFor(detected, targets[1]);
      const auto c = CandidatesFor(detected, targets[2]);
      const bool else_branch = !c.empty() && a.empty() && b.empty();
      if (then_branch.holds == else_branch) return {};
      if (then_branch.holds) return then_branch;
      return {true, {detected[c[0]]}};
    }
  }
  throw ValidationError("unknown relation");
}

}  // namespace audiorel
