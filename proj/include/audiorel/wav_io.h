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

#ifndef AUDIOREL_WAV_IO_H_
#define AUDIOREL_WAV_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace audiorel {

inline constexpr int kSampleRate = 16000;
inline constexpr double kSceneSeconds = 10.0;
inline constexpr int64_t kSceneSamples = 160000;

struct Audio {
  int sample_rate = kSampleRate;
  std::vector<float> samples;
};

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and scaled by 32767,
// so ReadWav(WriteWav(x)) is a fixed point after the first quantization.
void WriteWav(const std::filesystem::path& path, std::span<const float> samples,
              int sample_rate = kSampleRate);

// Reads mono 16-bit PCM WAV. Throws IoError / ValidationError.
Audio ReadWav(const std::filesystem::path& path);

// Quantizes to the 16-bit grid used by WriteWav.
float QuantizePcm16(float sample);

}  // namespace audiorel

#endif  // AUDIOREL_WAV_IO_H_
