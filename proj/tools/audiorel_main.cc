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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "audiorel/commands.h"

namespace {

using audiorel::RunConfig;

void AddCorpusFlag(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--corpus", config.corpus,
                  "Corpus config JSON (default: $AUDIOREL_CORPUS, then built-in)");
}

void AddMetricFlags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--config", config.eval_config,
                  "Evaluation config JSON (thresholds, w_s, sigma1, sigma2, "
                  "overlap_fraction, order_tolerance); flags override it");
  cmd->add_option("--sigma1", config.relation.sigma1, "Loudness reduction ratio");
  cmd->add_option("--sigma2", config.relation.sigma2, "Equal-distance tolerance");
  cmd->add_option("--overlap-fraction", config.relation.overlap_fraction,
                  "Simultaneity overlap, fraction of the shorter event");
  cmd->add_option("--order-tolerance", config.relation.order_tolerance,
                  "Temporal order slack in seconds");
  cmd->add_option("--w-s", config.msr.w_s, "Parsimony weight");
  cmd->add_option("--thresholds", config.msr.thresholds, "Confidence thresholds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relation-aware audio scene synthesis and evaluation"};
  app.require_subcommand(1);
  RunConfig config;
  std::string mode = "oracle";

  auto* seeds = app.add_subcommand("seeds", "Write procedural seed recordings");
  AddCorpusFlag(seeds, config);
  seeds->add_option("--out", config.out, "Output directory")->required();
  seeds->add_option("--seed", config.rng_seed, "RNG seed");
  seeds->add_option("--seconds", config.seed_seconds, "Length of each recording");

  auto* gen = app.add_subcommand("gen", "Synthesize a relation dataset");
  AddCorpusFlag(gen, config);
  gen->add_option("--seeds", config.seeds, "Seed-audio directory");
  gen->add_option("--pairs-per-relation", config.pairs_per_relation,
                  "Scenes per sub-relation");
  gen->add_option("--seed", config.rng_seed, "RNG seed");
  gen->add_option("--out", config.out, "Dataset directory")->required();

  auto* detect = app.add_subcommand("detect", "Detect events in a dataset");
  AddCorpusFlag(detect, config);
  detect->add_option("--mode", mode, "oracle|template")
      ->check(CLI::IsMember({"oracle", "template"}));
  detect->add_option("--in", config.in, "Dataset directory")->required();
  detect->add_option("--out", config.out, "Detections file (JSON Lines)")->required();
  detect->add_option("--seeds", config.seeds, "Seed-audio directory (template mode)");
  detect->add_option("--threads", config.threads, "Worker threads (0: all cores)");

  auto* eval = app.add_subcommand("eval", "Score a dataset");
  AddCorpusFlag(eval, config);
  eval->add_option("--in", config.in, "Dataset directory")->required();
  auto* mode_opt = eval->add_option("--mode", mode, "Inline detector: oracle|template")
                       ->check(CLI::IsMember({"oracle", "template"}));
  eval->add_option("--detections", config.detections, "Detections file to consume")
      ->excludes(mode_opt);
  eval->add_option("--seeds", config.seeds, "Seed-audio directory (template mode)");
  eval->add_option("--out", config.out, "Directory for report.json/.txt and relations.tsv");
  eval->add_option("--fad-gen", config.fad_gen, "Generated embeddings for FAD");
  eval->add_option("--fad-ref", config.fad_ref, "Reference embeddings for FAD");
  eval->add_option("--fd-gen", config.fd_gen, "Generated embeddings for FD");
  eval->add_option("--fd-ref", config.fd_ref, "Reference embeddings for FD");
  eval->add_option("--kl-gen", config.kl_gen, "Generated class probabilities for KL");
  eval->add_option("--kl-ref", config.kl_ref, "Reference class probabilities for KL");
  eval->add_option("--threads", config.threads, "Worker threads (0: all cores)");
  AddMetricFlags(eval, config);

  auto* report = app.add_subcommand("report", "Render a saved report");
  report->add_option("--in", config.in, "report.json")->required();
  report->add_option("--out", config.out, "Directory for rendered files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : audiorel::kExitConfig;
  }

  return audiorel::RunGuarded(
      [&] {
        config.mode = *audiorel::ParseDetectorMode(mode);
        if (eval->parsed()) {
          // File values first, then any explicit flags on top.
          if (!config.eval_config.empty()) {
            RunConfig flags = config;
            audiorel::ApplyEvalConfigFile(config.eval_config, config.msr, config.relation);
            for (const char* name : {"--sigma1", "--sigma2", "--overlap-fraction",
                                     "--order-tolerance", "--w-s", "--thresholds"}) {
              if (eval->count(name) == 0) continue;
              const std::string n = name;
              if (n == "--sigma1") config.relation.sigma1 = flags.relation.sigma1;
              if (n == "--sigma2") config.relation.sigma2 = flags.relation.sigma2;
              if (n == "--overlap-fraction") {
                config.relation.overlap_fraction = flags.relation.overlap_fraction;
              }
              if (n == "--order-tolerance") {
                config.relation.order_tolerance = flags.relation.order_tolerance;
              }
              if (n == "--w-s") config.msr.w_s = flags.msr.w_s;
              if (n == "--thresholds") config.msr.thresholds = flags.msr.thresholds;
            }
          }
          audiorel::CmdEval(config, std::cout);
        } else if (seeds->parsed()) {
          audiorel::CmdSeeds(config, std::cout);
        } else if (gen->parsed()) {
          audiorel::CmdGen(config, std::cout);
        } else if (detect->parsed()) {
          audiorel::CmdDetect(config, std::cout);
        } else if (report->parsed()) {
          audiorel::CmdReport(config, std::cout);
        }
      },
      std::cerr);
}
