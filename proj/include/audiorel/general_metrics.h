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

#ifndef AUDIOREL_GENERAL_METRICS_H_
#define AUDIOREL_GENERAL_METRICS_H_

#include <Eigen/Dense>

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace audiorel {

// Rows are embedding vectors.
struct EmbeddingSet {
  std::string source;
  Eigen::MatrixXd vectors;
};

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Sample mean and unbiased (n - 1) covariance. Needs >= 2 rows.
GaussianStats EstimateGaussian(const EmbeddingSet& set);

// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}). The trace of the
// product root is taken from the symmetric form sqrt(S_a) S_b sqrt(S_a);
// eigenvalues down to -eig_tolerance * max|eig| are clamped to zero, larger
// negative ones raise ValidationError.
double FrechetDistance(const GaussianStats& a, const GaussianStats& b,
                       double eig_tolerance = 1e-6);
double FrechetDistance(const EmbeddingSet& a, const EmbeddingSet& b);

struct KlResult {
  double mean = 0.0;
  bool floored = false;  // some q fell below the 1e-12 floor where p > 0
};

// Mean over pairs of sum p * ln(p / q), with 0 ln(0 / q) = 0.
KlResult KlScore(std::span<const std::vector<double>> p,
                 std::span<const std::vector<double>> q);

// Embedding interchange (JSON Lines): a header line
//   {"dimension": d, "source": "vggish"}
// then one {"scene_id": "...", "vectors": [[...], ...]} line per scene.
struct EmbeddingFile {
  std::string source;
  int dimension = 0;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> scenes;
};

// Probability interchange: header {"num_classes": c, "source": "..."} then
// {"scene_id": "...", "probs": [...]} lines.
struct ProbabilityFile {
  std::string source;
  int num_classes = 0;
  std::vector<std::pair<std::string, std::vector<double>>> scenes;
};

EmbeddingFile ParseEmbeddingFile(std::string_view text);
EmbeddingFile ReadEmbeddingFile(const std::filesystem::path& path);
void WriteEmbeddingFile(const EmbeddingFile& file,
                        const std::filesystem::path& path);
ProbabilityFile ParseProbabilityFile(std::string_view text);
ProbabilityFile ReadProbabilityFile(const std::filesystem::path& path);
void WriteProbabilityFile(const ProbabilityFile& file,
                          const std::filesystem::path& path);

// Stacks the vectors of every scene not in `exclude`.
EmbeddingSet CollectEmbeddings(const EmbeddingFile& file,
                               const std::set<std::string>& exclude = {});

// KL between matched scenes: p from `reference`, q from `generated`. Scenes in
// `exclude` or missing from either file are skipped.
KlResult KlBetween(const ProbabilityFile& reference,
                   const ProbabilityFile& generated,
                   const std::set<std::string>& exclude = {});

}  // namespace audiorel

#endif  // AUDIOREL_GENERAL_METRICS_H_
