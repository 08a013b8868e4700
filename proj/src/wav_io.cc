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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "audiorel/errors.h"

namespace audiorel {
namespace {

constexpr float kPcmScale = 32767.0f;

void PutU32(std::vector<char>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU16(std::vector<char>& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}
uint32_t GetU32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t GetU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

int16_t ToPcm(float sample) {
  const float clamped = std::clamp(sample, -1.0f, 1.0f);
  return static_cast<int16_t>(std::lround(clamped * kPcmScale));
}

}  // namespace

float QuantizePcm16(float sample) { return ToPcm(sample) / kPcmScale; }

void WriteWav(const std::filesystem::path& path, std::span<const float> samples,
              int sample_rate) {
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  std::vector<char> buf;
  buf.reserve(44 + data_bytes);
  buf.insert(buf.end(), {'R', 'I', 'F', 'F'});
  PutU32(buf, 36 + data_bytes);
  buf.insert(buf.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(buf, 16);
  PutU16(buf, 1);  // PCM
  PutU16(buf, 1);  // mono
  PutU32(buf, static_cast<uint32_t>(sample_rate));
  PutU32(buf, static_cast<uint32_t>(sample_rate) * 2);
  PutU16(buf, 2);
  PutU16(buf, 16);
  buf.insert(buf.end(), {'d', 'a', 't', 'a'});
  PutU32(buf, data_bytes);
  for (float s : samples) PutU16(buf, static_cast<uint16_t>(ToPcm(s)));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Audio ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError(name + ": not a RIFF/WAVE file");
  }
  Audio audio;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const uint32_t size = GetU32(chunk + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw ValidationError(name + ": truncated chunk");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw ValidationError(name + ": short fmt chunk");
      const uint16_t format = GetU16(bytes.data() + body);
      const uint16_t channels = GetU16(bytes.data() + body + 2);
      audio.sample_rate = static_cast<int>(GetU32(bytes.data() + body + 4));
      const uint16_t bits = GetU16(bytes.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ValidationError(name + ": only mono 16-bit PCM is supported");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw ValidationError(name + ": data before fmt chunk");
      const size_t n = size / 2;
      audio.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        const auto v = static_cast<int16_t>(GetU16(bytes.data() + body + 2 * i));
        audio.samples[i] = v / kPcmScale;
      }
      return audio;
    }
    pos = body + size + (size & 1);
  }
  throw ValidationError(name + ": no data chunk");
}

}  // namespace audiorel
