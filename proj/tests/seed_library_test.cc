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

#include <cmath>
#include <vector>

#include "audiorel/errors.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace audiorel {
namespace {

TEST(SeedLibraryTest, SlicesTileRecordingWithinBounds) {
  const SeedRecording rec = SynthesizeSeedRecording(3, 1, 14.3, 9);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto clips = SliceRecording(rec, seed);
    ASSERT_FALSE(clips.empty());
    int64_t expected_offset = 0;
    for (size_t i = 0; i < clips.size(); ++i) {
      const SeedClip& c = clips[i];
      EXPECT_EQ(c.offset, expected_offset);
      EXPECT_GE(c.samples.size(), static_cast<size_t>(kMinSliceSamples));
      EXPECT_LE(c.samples.size(), static_cast<size_t>(kMaxSliceSamples));
      EXPECT_EQ(c.ref.slice_index, static_cast<int>(i));
      EXPECT_EQ(c.ref.source_id, 1);
      for (size_t k = 0; k < c.samples.size(); k += 997) {
        EXPECT_EQ(c.samples[k], rec.samples[c.offset + k]);
      }
      expected_offset += static_cast<int64_t>(c.samples.size());
    }
    // Whatever is left over is shorter than the 1 s minimum or did not fit
    // the last drawn length.
    EXPECT_LE(expected_offset, static_cast<int64_t>(rec.samples.size()));
  }
}

TEST(SeedLibraryTest, SlicingIsDeterministic) {
  const SeedRecording rec = SynthesizeSeedRecording(7, 0, 14.0, 1);
  const auto a = SliceRecording(rec, 5);
  const auto b = SliceRecording(rec, 5);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].samples, b[i].samples);
}

TEST(SeedLibraryTest, ShortRecordingYieldsNoClip) {
  SeedRecording rec{2, 0, std::vector<float>(kMinSliceSamples - 1, 0.1f)};
  EXPECT_TRUE(SliceRecording(rec, 0).empty());
  EXPECT_THROW(SeedLibrary({rec}, 0), ValidationError);
}

TEST(SeedLibraryTest, SyntheticRecordingsAreBoundedAndDistinct) {
  const SeedRecording a = SynthesizeSeedRecording(0, 0, 2.0, 0);
  const SeedRecording b = SynthesizeSeedRecording(1, 0, 2.0, 0);
  ASSERT_EQ(a.samples.size(), 32000u);
  double diff = 0.0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_LE(std::abs(a.samples[i]), 1.0f);
    diff += std::abs(a.samples[i] - b.samples[i]);
  }
  EXPECT_GT(diff, 100.0);
}

TEST(SeedLibraryTest, ClipLookup) {
  const SeedLibrary& lib = testing::TestLibrary();
  EXPECT_EQ(lib.num_classes(), kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto clips = lib.ClipsFor(c);
    ASSERT_FALSE(clips.empty());
    for (const auto& clip : clips) {
      EXPECT_EQ(clip.class_id, c);
      EXPECT_EQ(&lib.Clip(c, clip.ref), &clip);
    }
  }
  EXPECT_THROW(lib.Clip(0, ClipRef{0, 99}), ValidationError);
  EXPECT_THROW(lib.Clip(0, ClipRef{7, 0}), ValidationError);
}

TEST(SeedLibraryTest, DirectoryRoundTrip) {
  testing::TempDir dir("seeds");
  WriteSyntheticSeedDirectory(dir.path(), 3, 6.0, 2);
  const SeedLibrary lib = SeedLibrary::LoadDirectory(dir.path(), 11, 2);
  EXPECT_EQ(lib.num_classes(), 2);
  EXPECT_EQ(lib.slice_seed(), 11u);
  EXPECT_TRUE(std::filesystem::exists(dir / SeedFileName(1, 4)));
  EXPECT_THROW(SeedLibrary::LoadDirectory(dir / "nope", 0, 2), ConfigError);
  EXPECT_THROW(SeedLibrary::LoadDirectory(dir.path(), 0, 3), ValidationError);
}

}  // namespace
}  // namespace audiorel
