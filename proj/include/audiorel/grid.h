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

#ifndef AUDIOREL_GRID_H_
#define AUDIOREL_GRID_H_

#include <cmath>
#include <cstdint>

#include "audiorel/wav_io.h"

namespace audiorel {

// Detection time grid: 20 cells of 0.5 s over a 10 s scene.
inline constexpr double kGridSeconds = 0.5;
inline constexpr int64_t kGridSamples = kSampleRate / 2;
inline constexpr int kGridCells = 20;

inline double FloorToGrid(double t) {
  return std::floor(t / kGridSeconds + 1e-9) * kGridSeconds;
}
inline double CeilToGrid(double t) {
  return std::ceil(t / kGridSeconds - 1e-9) * kGridSeconds;
}
inline int64_t FloorToGridSamples(int64_t n) {
  return (n / kGridSamples) * kGridSamples;
}
inline int64_t CeilToGridSamples(int64_t n) {
  return ((n + kGridSamples - 1) / kGridSamples) * kGridSamples;
}
inline bool OnGrid(double t) {
  return std::abs(t / kGridSeconds - std::round(t / kGridSeconds)) < 1e-6;
}

}  // namespace audiorel

#endif  // AUDIOREL_GRID_H_
