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

#include "audiorel/wav_io.h"

#include <cstdint>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "audiorel/errors.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace audiorel {
namespace {

uint32_t Le32(const std::string& b, size_t at) {
  return static_cast<uint8_t>(b[at]) | static_cast<uint8_t>(b[at + 1]) << 8 |
         static_cast<uint8_t>(b[at + 2]) << 16 |
         static_cast<uint32_t>(static_cast<uint8_t>(b[at + 3])) << 24;
}

uint16_t Le16(const std::string& b, size_t at) {
  return static_cast<uint16_t>(static_cast<uint8_t>(b[at]) |
                               static_cast<uint8_t>(b[at + 1]) << 8);
}

TEST(WavIoTest, HeaderIsCanonicalPcm16Mono) {
  testing::TempDir dir("wav");
  const std::vector<float> samples = {0.0f, 0.5f, -0.5f, 1.0f};
  WriteWav(dir / "a.wav", samples);
  const std::string bytes = testing::ReadFile(dir / "a.wav");
  ASSERT_EQ(bytes.size(), 44u + 8u);
  EXPECT_EQ(bytes.substr(0, 4), "RIFF");
  EXPECT_EQ(bytes.substr(8, 4), "WAVE");
  EXPECT_EQ(Le16(bytes, 20), 1);  // PCM
  EXPECT_EQ(Le16(bytes, 22), 1);  // mono
  EXPECT_EQ(Le32(bytes, 24), 16000u);
  EXPECT_EQ(Le16(bytes, 34), 16);
  EXPECT_EQ(Le32(bytes, 40), 8u);
  EXPECT_EQ(static_cast<int16_t>(Le16(bytes, 46)), 16384);  // round(0.5 * 32767)
  EXPECT_EQ(static_cast<int16_t>(Le16(bytes, 50)), 32767);
}

TEST(WavIoTest, RoundTripIsQuantization) {
  testing::TempDir dir("wav_rt");
  std::vector<float> samples;
  for (int i = 0; i < 1000; ++i) samples.push_back(std::sin(0.01f * i) * 0.8f);
  samples.push_back(1.7f);  // clamps
  samples.push_back(-3.0f);
  WriteWav(dir / "a.wav", samples);
  const Audio audio = ReadWav(dir / "a.wav");
  EXPECT_EQ(audio.sample_rate, kSampleRate);
  ASSERT_EQ(audio.samples.size(), samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(audio.samples[i], QuantizePcm16(samples[i])) << i;
  }
  EXPECT_EQ(audio.samples[1000], 1.0f);
  EXPECT_EQ(audio.samples[1001], -1.0f);
  // A second pass is a fixed point.
  WriteWav(dir / "b.wav", audio.samples);
  EXPECT_EQ(ReadWav(dir / "b.wav").samples, audio.samples);
}

TEST(WavIoTest, RejectsBadFiles) {
  testing::TempDir dir("wav_bad");
  EXPECT_THROW(ReadWav(dir / "missing.wav"), IoError);
  testing::WriteFile(dir / "junk.wav", "this is not audio at all, just text....");
  EXPECT_THROW(ReadWav(dir / "junk.wav"), ValidationError);
  // Stereo header.
  WriteWav(dir / "s.wav", std::vector<float>(4, 0.0f));
  std::string bytes = testing::ReadFile(dir / "s.wav");
  bytes[22] = 2;
  testing::WriteFile(dir / "s.wav", bytes);
  EXPECT_THROW(ReadWav(dir / "s.wav"), ValidationError);
}

}  // namespace
}  // namespace audiorel
