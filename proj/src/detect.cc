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

#include "audiorel/detect.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "audiorel/errors.h"
#include "json.hpp"

namespace audiorel {
namespace {

using nlohmann::json;

// Magnitude floor for the log spectrum; sits well above 16-bit quantization
// noise so digital silence and dithered silence pool to the same flat vector.
constexpr double kLogFloor = 1e-2;

std::mutex& FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

std::string EventWhere(size_t line, size_t index) {
  return "line " + std::to_string(line) + ", event " + std::to_string(index);
}

}  // namespace

void SortEvents(std::vector<DetectedEvent>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const DetectedEvent& a, const DetectedEvent& b) {
                     if (a.t1 != b.t1) return a.t1 < b.t1;
                     return a.confidence > b.confidence;
                   });
}

std::string CheckDetectedEvent(const DetectedEvent& e) {
  if (e.label < 0 || e.label >= kNumClasses) return "label out of range";
  if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) {
    return "confidence must be in [0, 1]";
  }
  if (!(e.t1 >= 0.0 && e.t2 <= kSceneSeconds)) return "times must lie in [0, 10]";
  if (!(e.t2 > e.t1)) return "t2 must exceed t1";
  if (!OnGrid(e.t1) || !OnGrid(e.t2)) return "times must lie on the 0.5 s grid";
  if (e.duration() < kGridSeconds - 1e-9) return "duration below 0.5 s";
  return {};
}

EventSet OracleDetect(const SceneManifest& manifest) {
  EventSet set;
  set.scene_id = manifest.scene_id;
  for (const auto& p : manifest.placements) {
    const double t1 =
        static_cast<double>(FloorToGridSamples(p.start_sample)) / kSampleRate;
    const double t2 =
        static_cast<double>(CeilToGridSamples(p.end_sample())) / kSampleRate;
    set.events.push_back({p.class_id, 1.0, t1, t2});
  }
  SortEvents(set.events);
  return set;
}

EventSet ThresholdFilter(const EventSet& events, double threshold) {
  EventSet out;
  out.scene_id = events.scene_id;
  for (const auto& e : events.events) {
    if (e.confidence >= threshold) out.events.push_back(e);
  }
  return out;
}

double NormalizedCrossCorrelation(std::span<const double> a,
                                  std::span<const double> b) {
  const size_t n = std::min(a.size(), b.size());
  if (n == 0) return 0.0;
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a, db = b[i] - mean_b;
    ab += da * db;
    aa += da * da;
    bb += db * db;
  }
  if (aa <= 1e-12 || bb <= 1e-12) return 0.0;
  return ab / std::sqrt(aa * bb);
}

namespace {

// Centres each row and scales it to unit norm; rows without variance become
// zero so they correlate with nothing.
void NormalizeRows(Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    row.array() -= row.mean();
    const double norm = row.norm();
    if (norm <= 1e-6) {
      row.setZero();
    } else {
      row /= norm;
    }
  }
}

}  // namespace

TemplateDetector::TemplateDetector(const SeedLibrary& library,
                                   TemplateParams params)
    : params_(params), num_classes_(library.num_classes()) {
  if (params_.frame <= 0 || params_.hop <= 0 || params_.frame % 2 != 0) {
    throw ConfigError("frame must be positive and even, hop positive");
  }
  if (library.clips().empty()) throw ValidationError("empty seed library");
  window_.resize(params_.frame);
  for (int i = 0; i < params_.frame; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / params_.frame);
  }
  std::vector<Eigen::RowVectorXd> rows;
  for (const auto& clip : library.clips()) {
    const Eigen::MatrixXd frames = FrameSpectra(clip.samples);
    if (frames.rows() == 0) continue;
    rows.push_back(frames.colwise().mean());
    template_labels_.push_back(clip.class_id);
  }
  if (rows.empty()) throw ValidationError("seed library produced no usable templates");
  templates_.resize(static_cast<Eigen::Index>(rows.size()), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) templates_.row(i) = rows[i];
  NormalizeRows(templates_);
}

Eigen::MatrixXd TemplateDetector::FrameSpectra(std::span<const float> samples) const {
  const int frame = params_.frame;
  const int bins = frame / 2 + 1;
  const int64_t total = static_cast<int64_t>(samples.size());
  const int64_t count = total < frame ? 0 : (total - frame) / params_.hop + 1;
  Eigen::MatrixXd spectra(count, bins);

  using RealBuf = std::unique_ptr<double, decltype(&fftw_free)>;
  using ComplexBuf = std::unique_ptr<fftw_complex, decltype(&fftw_free)>;
  RealBuf in(fftw_alloc_real(frame), &fftw_free);
  ComplexBuf out(fftw_alloc_complex(bins), &fftw_free);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    plan = fftw_plan_dft_r2c_1d(frame, in.get(), out.get(), FFTW_ESTIMATE);
  }
  for (int64_t f = 0; f < count; ++f) {
    const int64_t start = f * params_.hop;
    for (int i = 0; i < frame; ++i) in.get()[i] = samples[start + i] * window_[i];
    fftw_execute(plan);
    for (int k = 0; k < bins; ++k) {
      spectra(f, k) = std::log(std::hypot(out.get()[k][0], out.get()[k][1]) + kLogFloor);
    }
  }
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(plan);
  }
  return spectra;
}

ConfidenceMap TemplateDetector::Confidences(
    std::span<const float> waveform) const {
  if (static_cast<int64_t>(waveform.size()) != kSceneSamples) {
    throw ValidationError("template detection expects 10 s of 16 kHz audio, got " +
                          std::to_string(waveform.size()) + " samples");
  }
  Eigen::MatrixXd frames = FrameSpectra(waveform);
  NormalizeRows(frames);
  const Eigen::MatrixXd scores = frames * templates_.transpose();

  ConfidenceMap map;
  map.num_classes = num_classes_;
  map.values.assign(static_cast<size_t>(kGridCells) * num_classes_, 0.0);
  std::vector<int> frames_in_cell(kGridCells, 0);
  std::vector<double> best(num_classes_);
  for (Eigen::Index f = 0; f < scores.rows(); ++f) {
    const int64_t centre = f * params_.hop + params_.frame / 2;
    const int cell = static_cast<int>(centre / kGridSamples);
    if (cell >= kGridCells) continue;
    std::fill(best.begin(), best.end(), 0.0);
    for (Eigen::Index t = 0; t < scores.cols(); ++t) {
      double& b = best[template_labels_[t]];
      b = std::max(b, scores(f, t));
    }
    for (int label = 0; label < num_classes_; ++label) {
      map.values[cell * num_classes_ + label] += std::clamp(best[label], 0.0, 1.0);
    }
    ++frames_in_cell[cell];
  }
  for (int c = 0; c < kGridCells; ++c) {
    if (frames_in_cell[c] == 0) continue;
    for (int label = 0; label < num_classes_; ++label) {
      map.values[c * num_classes_ + label] /= frames_in_cell[c];
    }
  }
  return map;
}

EventSet TemplateDetector::Detect(std::span<const float> waveform,
                                  std::string scene_id) const {
  const ConfidenceMap map = Confidences(waveform);
  EventSet set;
  set.scene_id = std::move(scene_id);
  for (int label = 0; label < num_classes_; ++label) {
    int run_start = -1;
    double peak = 0.0;
    for (int c = 0; c <= kGridCells; ++c) {
      const bool active =
          c < kGridCells && map.at(c, label) >= params_.ncc_threshold;
      if (active) {
        if (run_start < 0) {
          run_start = c;
          peak = 0.0;
        }
        peak = std::max(peak, map.at(c, label));
      } else if (run_start >= 0) {
        const DetectedEvent e{label, peak, run_start * kGridSeconds,
                              c * kGridSeconds};
        if (e.duration() >= kGridSeconds) set.events.push_back(e);
        run_start = -1;
      }
    }
  }
  SortEvents(set.events);
  return set;
}

std::string FormatEventSet(const EventSet& set, const Corpus& corpus) {
  json record;
  record["scene_id"] = set.scene_id;
  record["events"] = json::array();
  for (const auto& e : set.events) {
    record["events"].push_back({{"label", corpus.Class(e.label).label},
                                {"confidence", e.confidence},
                                {"t1", e.t1},
                                {"t2", e.t2}});
  }
  return record.dump();
}

std::vector<EventSet> ParseEvents(std::string_view text, const Corpus& corpus) {
  std::vector<EventSet> sets;
  std::set<std::string> seen;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where + ": invalid JSON (" + e.what() + ")");
    }
    if (!record.is_object() || !record.contains("scene_id") ||
        !record["scene_id"].is_string()) {
      throw ValidationError(where + ": missing string field 'scene_id'");
    }
    if (!record.contains("events") || !record["events"].is_array()) {
      throw ValidationError(where + ": missing list field 'events'");
    }
    EventSet set;
    set.scene_id = record["scene_id"].get<std::string>();
    if (!seen.insert(set.scene_id).second) {
      throw ValidationError(where + ": duplicate scene_id '" + set.scene_id + "'");
    }
    const json& events = record["events"];
    for (size_t i = 0; i < events.size(); ++i) {
      const json& node = events[i];
      const std::string ew = EventWhere(line_no, i);
      if (!node.is_object()) throw ValidationError(ew + ": not an object");
      for (const char* key : {"confidence", "t1", "t2"}) {
        if (!node.contains(key) || !node[key].is_number()) {
          throw ValidationError(ew + ": field '" + key + "' must be a number");
        }
      }
      if (!node.contains("label") || !node["label"].is_string()) {
        throw ValidationError(ew + ": field 'label' must be a string");
      }
      const std::string label = node["label"].get<std::string>();
      const auto id = corpus.FindClass(label);
      if (!id) throw ValidationError(ew + ": unknown category label '" + label + "'");
      DetectedEvent e{*id, node["confidence"].get<double>(),
                      node["t1"].get<double>(), node["t2"].get<double>()};
      const std::string problem = CheckDetectedEvent(e);
      if (!problem.empty()) throw ValidationError(ew + ": " + problem);
      set.events.push_back(e);
    }
    SortEvents(set.events);
    sets.push_back(std::move(set));
  }
  return sets;
}

void WriteEvents(std::span<const EventSet> sets, const Corpus& corpus,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& set : sets) out << FormatEventSet(set, corpus) << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<EventSet> ReadEvents(const std::filesystem::path& path,
                                 const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open detections file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseEvents(buffer.str(), corpus);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace audiorel
