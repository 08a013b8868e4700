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

#ifndef AUDIOREL_COMMANDS_H_
#define AUDIOREL_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "audiorel/corpus.h"
#include "audiorel/errors.h"
#include "audiorel/metrics.h"
#include "audiorel/relations.h"

namespace audiorel {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitValidation = 4,
};

enum class DetectorMode { kOracle, kTemplate };

std::optional<DetectorMode> ParseDetectorMode(std::string_view name);

struct RunConfig {
  std::filesystem::path corpus;  // empty: $AUDIOREL_CORPUS, then built-in
  std::filesystem::path seeds;   // empty: corpus seed_dir
  std::filesystem::path in;
  std::filesystem::path out;
  uint64_t rng_seed = 42;
  int pairs_per_relation = 8;
  double seed_seconds = 14.0;
  DetectorMode mode = DetectorMode::kOracle;
  std::filesystem::path detections;  // eval: consume instead of detecting
  std::filesystem::path eval_config;
  MsrConfig msr;
  RelationParams relation;
  // Optional general-metric inputs (generated / reference pairs).
  std::filesystem::path fad_gen, fad_ref;
  std::filesystem::path fd_gen, fd_ref;
  std::filesystem::path kl_gen, kl_ref;
  int threads = 0;  // 0: hardware concurrency
};

// Corpus resolution order: explicit path, AUDIOREL_CORPUS, built-in default.
Corpus ResolveCorpus(const RunConfig& config);

// Applies thresholds / w_s / sigma fields from a JSON evaluation config file.
void ApplyEvalConfigFile(const std::filesystem::path& path, MsrConfig& msr,
                         RelationParams& relation);

// Each command throws ConfigError / IoError / ValidationError on failure and
// writes progress to `log`.
void CmdSeeds(const RunConfig& config, std::ostream& log);
void CmdGen(const RunConfig& config, std::ostream& log);
void CmdDetect(const RunConfig& config, std::ostream& log);
EvalReport CmdEval(const RunConfig& config, std::ostream& log);
void CmdReport(const RunConfig& config, std::ostream& out);

// Runs `fn` and maps exceptions to exit codes with a one-line diagnostic.
template <typename Fn>
int RunGuarded(Fn&& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace audiorel

#endif  // AUDIOREL_COMMANDS_H_
