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

#include "audiorel/commands.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "audiorel/detect.h"
#include "audiorel/general_metrics.h"
#include "audiorel/report.h"
#include "audiorel/seed_library.h"
#include "audiorel/synth.h"
#include "audiorel/wav_io.h"
#include "json.hpp"

namespace audiorel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ParallelFor(size_t count, int threads, const std::function<void(size_t)>& fn) {
  size_t workers = threads > 0 ? static_cast<size_t>(threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void RequireDirectory(const fs::path& dir, std::string_view what) {
  if (dir.empty()) throw ConfigError(std::string(what) + " not given");
  if (!fs::is_directory(dir)) {
    throw ConfigError(std::string(what) + " not found: " + dir.string());
  }
}

void RequireFile(const fs::path& path, std::string_view what) {
  if (!fs::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " not found: " + path.string());
  }
}

fs::path SeedDirectory(const RunConfig& config, const Corpus& corpus) {
  if (!config.seeds.empty()) return config.seeds;
  if (corpus.seed_dir()) return *corpus.seed_dir();
  throw ConfigError("no seed-audio directory: pass --seeds or set seed_dir in the corpus");
}

uint64_t DatasetSliceSeed(const fs::path& dir) {
  std::ifstream in(dir / "index.json");
  if (!in) throw ConfigError("no dataset index at " + (dir / "index.json").string());
  try {
    return json::parse(in).at("slice_seed").get<uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed dataset index: " + std::string(e.what()));
  }
}

std::vector<float> ReadSceneAudio(const fs::path& path) {
  Audio audio = ReadWav(path);
  if (audio.samples.size() != static_cast<size_t>(kSceneSamples)) {
    throw ValidationError(path.string() + ": expected a 10 s scene");
  }
  return std::move(audio.samples);
}

std::vector<EventSet> RunDetector(const RunConfig& config, const Corpus& corpus,
                                  const std::vector<SceneManifest>& scenes) {
  std::vector<EventSet> sets(scenes.size());
  if (config.mode == DetectorMode::kOracle) {
    for (size_t i = 0; i < scenes.size(); ++i) sets[i] = OracleDetect(scenes[i]);
    return sets;
  }
  const fs::path seed_dir = SeedDirectory(config, corpus);
  RequireDirectory(seed_dir, "seed-audio directory");
  const SeedLibrary library = SeedLibrary::LoadDirectory(
      seed_dir, DatasetSliceSeed(config.in), static_cast<int>(corpus.classes().size()));
  const TemplateDetector detector(library);
  ParallelFor(scenes.size(), config.threads, [&](size_t i) {
    const auto audio = ReadSceneAudio(config.in / scenes[i].audio_path);
    sets[i] = detector.Detect(audio, scenes[i].scene_id);
  });
  return sets;
}

std::optional<double> FrechetFromFiles(const fs::path& gen, const fs::path& ref,
                                       const std::set<std::string>& exclude,
                                       std::string_view name) {
  if (gen.empty() && ref.empty()) return std::nullopt;
  if (gen.empty() || ref.empty()) {
    throw ConfigError(std::string(name) + " needs both generated and reference embeddings");
  }
  const EmbeddingSet a = CollectEmbeddings(ReadEmbeddingFile(gen), exclude);
  const EmbeddingSet b = CollectEmbeddings(ReadEmbeddingFile(ref), exclude);
  return FrechetDistance(a, b);
}

}  // namespace

std::optional<DetectorMode> ParseDetectorMode(std::string_view name) {
  if (name == "oracle") return DetectorMode::kOracle;
  if (name == "template") return DetectorMode::kTemplate;
  return std::nullopt;
}

Corpus ResolveCorpus(const RunConfig& config) {
  if (!config.corpus.empty()) return LoadCorpus(config.corpus);
  if (const char* env = std::getenv("AUDIOREL_CORPUS"); env && *env) {
    return LoadCorpus(env);
  }
  return DefaultCorpus();
}

void ApplyEvalConfigFile(const fs::path& path, MsrConfig& msr,
                         RelationParams& relation) {
  RequireFile(path, "evaluation config");
  std::ifstream in(path);
  json j;
  try {
    j = json::parse(in);
    if (!j.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
    static const std::set<std::string> kKnown = {
        "thresholds", "w_s", "sigma1", "sigma2", "overlap_fraction", "order_tolerance"};
    for (const auto& [key, value] : j.items()) {
      if (!kKnown.count(key)) {
        throw ConfigError(path.string() + ": unknown key '" + key + "'");
      }
    }
    if (j.contains("thresholds")) msr.thresholds = j["thresholds"].get<std::vector<double>>();
    if (j.contains("w_s")) msr.w_s = j["w_s"].get<double>();
    if (j.contains("sigma1")) relation.sigma1 = j["sigma1"].get<double>();
    if (j.contains("sigma2")) relation.sigma2 = j["sigma2"].get<double>();
    if (j.contains("overlap_fraction")) {
      relation.overlap_fraction = j["overlap_fraction"].get<double>();
    }
    if (j.contains("order_tolerance")) {
      relation.order_tolerance = j["order_tolerance"].get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void CmdSeeds(const RunConfig& config, std::ostream& log) {
  if (config.out.empty()) throw ConfigError("--out not given");
  const Corpus corpus = ResolveCorpus(config);
  WriteSyntheticSeedDirectory(config.out, config.rng_seed, config.seed_seconds,
                              static_cast<int>(corpus.classes().size()));
  log << "wrote " << corpus.classes().size() * kSourcesPerClass
      << " seed recordings to " << config.out.string() << "\n";
}

void CmdGen(const RunConfig& config, std::ostream& log) {
  if (config.out.empty()) throw ConfigError("--out not given");
  if (config.pairs_per_relation < 1) throw ConfigError("--pairs-per-relation must be >= 1");
  const Corpus corpus = ResolveCorpus(config);
  const fs::path seed_dir = SeedDirectory(config, corpus);
  RequireDirectory(seed_dir, "seed-audio directory");
  const SeedLibrary library = SeedLibrary::LoadDirectory(
      seed_dir, config.rng_seed, static_cast<int>(corpus.classes().size()));
  DatasetOptions options;
  options.pairs_per_relation = config.pairs_per_relation;
  options.rng_seed = config.rng_seed;
  const auto scenes = GenDataset(corpus, library, options, config.out);
  log << "generated " << scenes.size() << " scenes in " << config.out.string() << "\n";
}

void CmdDetect(const RunConfig& config, std::ostream& log) {
  RequireDirectory(config.in, "dataset directory");
  if (config.out.empty()) throw ConfigError("--out not given");
  const Corpus corpus = ResolveCorpus(config);
  const auto scenes = LoadDataset(config.in);
  const auto sets = RunDetector(config, corpus, scenes);
  WriteEvents(sets, corpus, config.out);
  size_t events = 0;
  for (const auto& s : sets) events += s.events.size();
  log << "wrote " << events << " detections for " << sets.size() << " scenes to "
      << config.out.string() << "\n";
}

EvalReport CmdEval(const RunConfig& base, std::ostream& log) {
  RunConfig config = base;
  RequireDirectory(config.in, "dataset directory");
  config.msr.Validate();
  config.relation.Validate();
  const Corpus corpus = ResolveCorpus(config);
  const auto scenes = LoadDataset(config.in);

  std::vector<SceneInput> inputs(scenes.size());
  std::vector<EventSet> detections;
  std::vector<bool> have(scenes.size(), true);
  if (!config.detections.empty()) {
    RequireFile(config.detections, "detections file");
    std::map<std::string, size_t> position;
    for (size_t i = 0; i < scenes.size(); ++i) position[scenes[i].scene_id] = i;
    detections.resize(scenes.size());
    std::fill(have.begin(), have.end(), false);
    for (auto& set : ReadEvents(config.detections, corpus)) {
      const auto it = position.find(set.scene_id);
      if (it == position.end()) {
        throw ValidationError("detections for unknown scene '" + set.scene_id + "'");
      }
      have[it->second] = true;
      detections[it->second] = std::move(set);
    }
  } else {
    detections = RunDetector(config, corpus, scenes);
  }

  ParallelFor(scenes.size(), config.threads, [&](size_t i) {
    SceneInput& in = inputs[i];
    in.manifest = scenes[i];
    in.detections = std::move(detections[i]);
    in.detections.scene_id = scenes[i].scene_id;
    in.detections_missing = !have[i];
    in.waveform = ReadSceneAudio(config.in / scenes[i].audio_path);
    for (const auto& ref : scenes[i].reference_paths) {
      in.reference_waveforms.push_back(ReadSceneAudio(config.in / ref));
    }
  });

  EvalReport report = Mamsr(inputs, config.msr, config.relation);
  for (const auto& id : report.missing_detections) {
    log << "warning: no detections for scene " << id << "; scored as empty\n";
  }

  std::set<std::string> not_scenes;
  for (const auto& m : scenes) {
    if (m.relation == SubRelation::kNot) not_scenes.insert(m.scene_id);
  }
  report.general.fad = FrechetFromFiles(config.fad_gen, config.fad_ref, not_scenes, "FAD");
  report.general.fd = FrechetFromFiles(config.fd_gen, config.fd_ref, not_scenes, "FD");
  if (!config.kl_gen.empty() || !config.kl_ref.empty()) {
    if (config.kl_gen.empty() || config.kl_ref.empty()) {
      throw ConfigError("KL needs both generated and reference probability files");
    }
    const KlResult kl = KlBetween(ReadProbabilityFile(config.kl_ref),
                                  ReadProbabilityFile(config.kl_gen), not_scenes);
    report.general.kl = kl.mean;
    report.general.kl_floored = kl.floored;
  }
  if (report.general.fad || report.general.fd || report.general.kl) {
    report.notes.push_back("general metrics exclude not scenes");
  }

  if (!config.out.empty()) WriteReportFiles(report, config.out);
  log << RenderTables(report);
  return report;
}

void CmdReport(const RunConfig& config, std::ostream& out) {
  RequireFile(config.in, "report file");
  std::ifstream in(config.in, std::ios::binary);
  if (!in) throw IoError("cannot read " + config.in.string());
  std::stringstream text;
  text << in.rdbuf();
  const EvalReport report = ReportFromJson(text.str());
  if (!config.out.empty()) WriteReportFiles(report, config.out);
  out << RenderTables(report);
}

}  // namespace audiorel
