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
#include <map>
#include <vector>

#include "audiorel/errors.h"
#include "audiorel/random.h"
#include "gtest/gtest.h"
#include "relation_oracle.h"
#include "test_support.h"

namespace audiorel {
namespace {

const RelationParams kParams;

using testing::Constant;
using testing::RandomTargets;

bool Holds(SubRelation r, std::vector<DetectedEvent> events, std::vector<int> targets,
           std::optional<std::span<const float>> wave = {}) {
  return CheckRelation(r, events, targets, kParams, wave).holds;
}

TEST(RelationsTest, LoudnessClosedForms) {
  const std::vector<float> zero(kSceneSamples, 0.0f);
  EXPECT_EQ(Loudness(zero, 1.0, 2.0), 0.0);
  const auto wave = Constant(0.0, 10.0, 0.25f);
  EXPECT_NEAR(Loudness(wave, 1.0, 2.0), 0.25 * std::sqrt(16000.0), 1e-9);
  std::vector<float> scaled(wave);
  for (float& v : scaled) v *= 3.0f;
  EXPECT_NEAR(Loudness(scaled, 2.5, 4.0), 3.0 * Loudness(wave, 2.5, 4.0), 1e-6);
  EXPECT_THROW(Loudness(wave, 2.0, 2.0), ValidationError);
  EXPECT_THROW(Loudness(wave, -1.0, 2.0), ValidationError);
}

TEST(RelationsTest, BeforeAndAfterExamples) {
  const std::vector<DetectedEvent> ordered = {{0, 1, 0.5, 2.0}, {1, 1, 3.0, 5.0}};
  EXPECT_TRUE(Holds(SubRelation::kBefore, ordered, {0, 1}));
  const std::vector<DetectedEvent> swapped = {{1, 1, 0.5, 2.0}, {0, 1, 3.0, 5.0}};
  EXPECT_FALSE(Holds(SubRelation::kBefore, swapped, {0, 1}));
  EXPECT_TRUE(Holds(SubRelation::kAfter, swapped, {0, 1}));
}

TEST(RelationsTest, OrderToleranceAbsorbsOneGridStep) {
  // A shared grid boundary keeps the order; half a cell of overlap does not.
  EXPECT_TRUE(Holds(SubRelation::kBefore, {{0, 1, 0.0, 2.0}, {1, 1, 2.0, 3.0}}, {0, 1}));
  EXPECT_FALSE(Holds(SubRelation::kBefore, {{0, 1, 0.0, 2.5}, {1, 1, 2.0, 3.0}}, {0, 1}));
}

TEST(RelationsTest, SimultaneityExample) {
  EXPECT_TRUE(Holds(SubRelation::kSimultaneity, {{0, 1, 1, 4}, {1, 1, 2, 5}}, {0, 1}));
  EXPECT_FALSE(Holds(SubRelation::kSimultaneity, {{0, 1, 1, 4}, {1, 1, 3.5, 5}}, {0, 1}));
}

TEST(RelationsTest, CloseFirstRenderedAtHalfGain) {
  const EventPlacement near = testing::PlaceFirstClip(7, 1.0, 1.0);
  EventPlacement far = near;
  far.start_sample += 5 * kSampleRate;
  far.gain = 0.5;
  const std::vector<EventPlacement> placements = {near, far};
  const auto wave = RenderPlacements(placements, testing::TestLibrary());
  SceneManifest m;
  m.placements = placements;
  const EventSet set = OracleDetect(m);
  EXPECT_NEAR(Loudness(wave, set.events[0].t1, set.events[0].t2) /
                  Loudness(wave, set.events[1].t1, set.events[1].t2),
              2.0, 1e-5);
  const std::span<const float> view(wave);
  EXPECT_TRUE(Holds(SubRelation::kCloseFirst, set.events, {7, 7}, view));
  EXPECT_FALSE(Holds(SubRelation::kFarFirst, set.events, {7, 7}, view));
  EXPECT_FALSE(Holds(SubRelation::kEqualDist, set.events, {7, 7}, view));
}

TEST(RelationsTest, SpatialNeedsWaveform) {
  EXPECT_THROW(Holds(SubRelation::kEqualDist, {{0, 1, 1, 2}, {0, 1, 3, 4}}, {0, 0}),
               ConfigError);
}

TEST(RelationsTest, CompositionalExamples) {
  const std::vector<DetectedEvent> both = {{0, 1, 1, 2}, {1, 1, 3, 4}};
  EXPECT_FALSE(Holds(SubRelation::kOr, both, {0, 1}));
  EXPECT_TRUE(Holds(SubRelation::kOr, {{1, 1, 3, 4}}, {0, 1}));
  EXPECT_TRUE(Holds(SubRelation::kAnd, both, {0, 1}));
  EXPECT_FALSE(Holds(SubRelation::kAnd, {{1, 1, 3, 4}}, {0, 1}));
  EXPECT_TRUE(Holds(SubRelation::kNot, both, {2}));
  EXPECT_FALSE(Holds(SubRelation::kNot, both, {1}));
  EXPECT_TRUE(Holds(SubRelation::kCount, both, {1, 0}));
  EXPECT_FALSE(Holds(SubRelation::kCount, both, {0, 1, 2}));
  // ifthenelse: exactly one branch.
  EXPECT_TRUE(Holds(SubRelation::kIfThenElse, both, {0, 1, 2}));
  EXPECT_TRUE(Holds(SubRelation::kIfThenElse, {{2, 1, 1, 2}}, {0, 1, 2}));
  EXPECT_FALSE(Holds(SubRelation::kIfThenElse, {{2, 1, 1, 2}, {0, 1, 3, 4}}, {0, 1, 2}));
  EXPECT_FALSE(Holds(SubRelation::kIfThenElse, {}, {0, 1, 2}));
}

TEST(RelationsTest, WitnessFollowsConfidenceThenOnset) {
  const std::vector<DetectedEvent> events = {
      {0, 0.6, 0.0, 1.0}, {0, 0.9, 1.0, 2.0}, {1, 0.7, 5.0, 6.0}, {0, 0.9, 0.5, 1.5}};
  const RelationVerdict v = CheckRelation(SubRelation::kBefore, events,
                                          std::vector<int>{0, 1}, kParams);
  ASSERT_TRUE(v.holds);
  EXPECT_EQ(v.witness[0], events[3]);
  EXPECT_EQ(v.witness[1], events[2]);
}

TEST(RelationsTest, AgreesWithExhaustiveEnumeration) {
  Rng rng = MakeRng({2024});
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(UniformInt(rng, 0, 4));
    std::vector<DetectedEvent> events;
    std::vector<float> wave(kSceneSamples, 0.0f);
    for (int i = 0; i < n; ++i) {
      const int64_t c1 = UniformInt(rng, 0, 18);
      const int64_t c2 = UniformInt(rng, c1 + 1, std::min<int64_t>(20, c1 + 8));
      DetectedEvent e{static_cast<int>(UniformInt(rng, 0, 3)), UniformReal(rng, 0.5, 1.0),
                      c1 * 0.5, c2 * 0.5};
      events.push_back(e);
      wave = Constant(e.t1, e.t2, static_cast<float>(UniformReal(rng, 0.05, 0.5)), wave);
    }
    SortEvents(events);
    const std::span<const float> view(wave);
    for (SubRelation r : kAllSubRelations) {
      const auto targets = RandomTargets(r, rng);
      const bool got = CheckRelation(r, events, targets, kParams, view).holds;
      ASSERT_EQ(got, testing::ExhaustiveRelation(r, events, targets, wave, kParams))
          << "trial " << trial << " relation " << SubRelationName(r);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 11000);
}

TEST(RelationsTest, DualityAndSymmetry) {
  Rng rng = MakeRng({77});
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<DetectedEvent> events;
    std::vector<float> wave(kSceneSamples, 0.0f);
    for (int i = 0; i < 3; ++i) {
      const int64_t c1 = UniformInt(rng, 0, 15);
      DetectedEvent e{static_cast<int>(UniformInt(rng, 0, 2)), 1.0, c1 * 0.5,
                      (c1 + UniformInt(rng, 1, 4)) * 0.5};
      events.push_back(e);
      wave = Constant(e.t1, e.t2, static_cast<float>(UniformReal(rng, 0.1, 0.9)), wave);
    }
    SortEvents(events);
    const std::span<const float> view(wave);
    EXPECT_EQ(Holds(SubRelation::kBefore, events, {0, 1}),
              Holds(SubRelation::kAfter, events, {1, 0}));
    EXPECT_EQ(Holds(SubRelation::kAnd, events, {0, 1}),
              Holds(SubRelation::kAnd, events, {1, 0}));
    const std::vector<DetectedEvent> reversed(events.rbegin(), events.rend());
    EXPECT_EQ(Holds(SubRelation::kEqualDist, events, {0, 0}, view),
              Holds(SubRelation::kEqualDist, reversed, {0, 0}, view));
    // Non-target detections never matter.
    std::vector<DetectedEvent> extra = events;
    extra.push_back({9, 1.0, 0.0, 10.0});
    for (SubRelation r : kAllSubRelations) {
      const std::vector<int> targets = IsSpatial(r) ? std::vector<int>{0, 0}
                                       : r == SubRelation::kIfThenElse
                                           ? std::vector<int>{0, 1, 2}
                                       : r == SubRelation::kNot ? std::vector<int>{1}
                                                                : std::vector<int>{0, 1};
      EXPECT_EQ(Holds(r, events, targets, view), Holds(r, extra, targets, view));
    }
  }
}

TEST(RelationsTest, SpatialVerdictsAreScaleInvariant) {
  Rng rng = MakeRng({5});
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<float> wave(kSceneSamples, 0.0f);
    const DetectedEvent a{0, 1.0, 1.0, 3.0};
    const DetectedEvent b{0, 1.0, 5.0, 7.0};
    wave = Constant(a.t1, a.t2, static_cast<float>(UniformReal(rng, 0.05, 1.0)), wave);
    wave = Constant(b.t1, b.t2, static_cast<float>(UniformReal(rng, 0.05, 1.0)), wave);
    std::vector<float> quiet(wave);
    for (float& v : quiet) v *= 0.3f;
    for (SubRelation r : {SubRelation::kCloseFirst, SubRelation::kFarFirst,
                          SubRelation::kEqualDist}) {
      EXPECT_EQ(Holds(r, {a, b}, {0, 0}, std::span<const float>(wave)),
                Holds(r, {a, b}, {0, 0}, std::span<const float>(quiet)));
    }
  }
}

TEST(RelationsTest, ParamsValidate) {
  RelationParams p;
  EXPECT_NO_THROW(p.Validate());
  p.sigma1 = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.order_tolerance = -0.1;
  EXPECT_THROW(p.Validate(), ConfigError);
}

}  // namespace
}  // namespace audiorel
