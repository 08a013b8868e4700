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

#include "audiorel/general_metrics.h"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "audiorel/errors.h"
#include "audiorel/random.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace audiorel {
namespace {

Eigen::MatrixXd RandomRows(Rng& rng, int n, int d, double scale = 1.0) {
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = scale * UniformReal(rng, -1.0, 1.0);
  }
  return m;
}

// Column-wise standardization: sample mean 0 and unbiased variance 1.
Eigen::VectorXd Standardized(Rng& rng, int n) {
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = UniformReal(rng, -1.0, 1.0);
  z.array() -= z.mean();
  z /= std::sqrt(z.squaredNorm() / (n - 1));
  return z;
}

// Trace of (A B)^{1/2} from the eigenvalues of the non-symmetric product.
double OracleFd(const GaussianStats& a, const GaussianStats& b) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a.covariance * b.covariance);
  double root_trace = 0.0;
  for (const auto& lambda : solver.eigenvalues()) {
    root_trace += std::sqrt(std::max(0.0, lambda.real()));
  }
  return (a.mean - b.mean).squaredNorm() + a.covariance.trace() +
         b.covariance.trace() - 2.0 * root_trace;
}

GaussianStats OneD(double mean, double variance) {
  GaussianStats s;
  s.mean = Eigen::VectorXd::Constant(1, mean);
  s.covariance = Eigen::MatrixXd::Constant(1, 1, variance);
  return s;
}

TEST(GeneralMetricsTest, EstimateGaussianIsUnbiased) {
  EmbeddingSet set;
  set.vectors.resize(3, 1);
  set.vectors << 1.0, 2.0, 6.0;
  const GaussianStats g = EstimateGaussian(set);
  EXPECT_DOUBLE_EQ(g.mean(0), 3.0);
  EXPECT_DOUBLE_EQ(g.covariance(0, 0), 7.0);  // (4 + 1 + 9) / 2
  set.vectors.resize(1, 1);
  EXPECT_THROW(EstimateGaussian(set), ValidationError);
}

TEST(GeneralMetricsTest, OneDimensionalClosedForms) {
  EXPECT_NEAR(FrechetDistance(OneD(0, 1), OneD(1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(FrechetDistance(OneD(0, 4), OneD(0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(FrechetDistance(OneD(2, 9), OneD(-1, 1)), 9.0 + 4.0, 1e-12);
}

TEST(GeneralMetricsTest, SampleSetsWithExactMoments) {
  Rng rng = MakeRng({3});
  const Eigen::VectorXd z1 = Standardized(rng, 200);
  const Eigen::VectorXd z2 = Standardized(rng, 150);
  EmbeddingSet a, b;
  a.vectors = z1;                                                // N(0, 1)
  b.vectors = (z2.array() + 1.0).matrix();                       // N(1, 1)
  EXPECT_NEAR(FrechetDistance(a, b), 1.0, 1e-9);
  b.vectors = 2.0 * z2;                                          // N(0, 4)
  EXPECT_NEAR(FrechetDistance(a, b), 1.0, 1e-9);
}

TEST(GeneralMetricsTest, DiagonalCovarianceMatchesPerDimensionForm) {
  Rng rng = MakeRng({6});
  GaussianStats a, b;
  const int d = 16;
  a.mean = b.mean = Eigen::VectorXd::Zero(d);
  a.covariance = b.covariance = Eigen::MatrixXd::Zero(d, d);
  double expected = 0.0;
  for (int i = 0; i < d; ++i) {
    a.mean(i) = UniformReal(rng, -2, 2);
    b.mean(i) = UniformReal(rng, -2, 2);
    const double sa = UniformReal(rng, 0.1, 3), sb = UniformReal(rng, 0.1, 3);
    a.covariance(i, i) = sa * sa;
    b.covariance(i, i) = sb * sb;
    expected += std::pow(a.mean(i) - b.mean(i), 2) + std::pow(sa - sb, 2);
  }
  EXPECT_NEAR(FrechetDistance(a, b), expected, 1e-6);
}

TEST(GeneralMetricsTest, FullCovarianceMatchesProductEigenOracle) {
  Rng rng = MakeRng({9});
  for (int trial = 0; trial < 10; ++trial) {
    EmbeddingSet x, y;
    x.vectors = RandomRows(rng, 80, 12);
    y.vectors = RandomRows(rng, 90, 12, 1.7);
    const GaussianStats a = EstimateGaussian(x), b = EstimateGaussian(y);
    EXPECT_NEAR(FrechetDistance(a, b), OracleFd(a, b), 1e-8);
  }
}

TEST(GeneralMetricsTest, IdentityAndSymmetry) {
  Rng rng = MakeRng({12});
  EmbeddingSet x, y;
  x.vectors = RandomRows(rng, 100, 64);
  y.vectors = RandomRows(rng, 120, 64, 0.8);
  EXPECT_LE(std::abs(FrechetDistance(x, x)), 1e-8);
  EXPECT_NEAR(FrechetDistance(x, y), FrechetDistance(y, x), 1e-8);
  EXPECT_GT(FrechetDistance(x, y), 0.0);
}

TEST(GeneralMetricsTest, RankDeficientCovarianceIsClamped) {
  Rng rng = MakeRng({1});
  EmbeddingSet x;
  x.vectors = RandomRows(rng, 10, 32);  // covariance rank 9
  EXPECT_LE(std::abs(FrechetDistance(x, x)), 1e-8);
}

TEST(GeneralMetricsTest, DimensionMismatch) {
  Rng rng = MakeRng({2});
  EmbeddingSet x, y;
  x.vectors = RandomRows(rng, 5, 3);
  y.vectors = RandomRows(rng, 5, 4);
  EXPECT_THROW(FrechetDistance(x, y), ValidationError);
}

TEST(GeneralMetricsTest, KlExamples) {
  const std::vector<std::vector<double>> p = {{0.5, 0.5}};
  const std::vector<std::vector<double>> q = {{0.25, 0.75}};
  const KlResult r = KlScore(p, q);
  EXPECT_NEAR(r.mean, 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(r.mean, 0.143841, 1e-6);
  EXPECT_FALSE(r.floored);
  EXPECT_EQ(KlScore(p, p).mean, 0.0);
  // 0 ln(0 / q) = 0
  EXPECT_NEAR(KlScore(std::vector<std::vector<double>>{{1.0, 0.0}},
                      std::vector<std::vector<double>>{{0.5, 0.5}}).mean,
              std::log(2.0), 1e-15);
}

TEST(GeneralMetricsTest, KlFloorsZeroQ) {
  const std::vector<std::vector<double>> p = {{0.5, 0.5}};
  const std::vector<std::vector<double>> q = {{1.0, 0.0}};
  const KlResult r = KlScore(p, q);
  EXPECT_TRUE(r.floored);
  EXPECT_TRUE(std::isfinite(r.mean));
  EXPECT_NEAR(r.mean, 0.5 * std::log(0.5) + 0.5 * std::log(0.5 / 1e-12), 1e-9);
}

TEST(GeneralMetricsTest, KlRejectsBadInput) {
  const std::vector<std::vector<double>> ok = {{0.5, 0.5}};
  EXPECT_THROW(KlScore(ok, std::vector<std::vector<double>>{{0.6, 0.6}}), ValidationError);
  EXPECT_THROW(KlScore(ok, std::vector<std::vector<double>>{{1.2, -0.2}}), ValidationError);
  EXPECT_THROW(KlScore(ok, std::vector<std::vector<double>>{{0.2, 0.3, 0.5}}), ValidationError);
  EXPECT_THROW(KlScore(ok, std::vector<std::vector<double>>{}), ValidationError);
}

TEST(GeneralMetricsTest, EmbeddingFileRoundTripAndExclusion) {
  EmbeddingFile file;
  file.source = "test";
  file.dimension = 3;
  file.scenes = {{"a", {{1, 2, 3}, {4, 5, 6}}}, {"not_0000", {{9, 9, 9}}}, {"b", {{0, 0, 1}}}};
  testing::TempDir dir("emb");
  WriteEmbeddingFile(file, dir / "e.jsonl");
  const EmbeddingFile back = ReadEmbeddingFile(dir / "e.jsonl");
  EXPECT_EQ(back.source, "test");
  EXPECT_EQ(back.dimension, 3);
  EXPECT_EQ(back.scenes, file.scenes);
  const EmbeddingSet set = CollectEmbeddings(back, {"not_0000"});
  EXPECT_EQ(set.vectors.rows(), 3);
  EXPECT_EQ(set.vectors(2, 2), 1.0);
}

TEST(GeneralMetricsTest, EmbeddingFileDiagnostics) {
  auto message = [](const std::string& text) -> std::string {
    try {
      ParseEmbeddingFile(text);
    } catch (const ValidationError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"scene_id":"a","vectors":[[1]]})").find("dimension"),
            std::string::npos);
  const std::string bad_len = "{\"dimension\":2,\"source\":\"x\"}\n"
                              "{\"scene_id\":\"a\",\"vectors\":[[1,2],[3]]}\n";
  EXPECT_NE(message(bad_len).find("line 2"), std::string::npos) << message(bad_len);
  EXPECT_THROW(ReadEmbeddingFile("/nonexistent/e.jsonl"), IoError);
}

TEST(GeneralMetricsTest, ProbabilityFilesAndKlBetween) {
  ProbabilityFile ref, gen;
  ref.source = gen.source = "t";
  ref.num_classes = gen.num_classes = 2;
  ref.scenes = {{"a", {0.5, 0.5}}, {"n", {1.0, 0.0}}};
  gen.scenes = {{"n", {0.0, 1.0}}, {"a", {0.25, 0.75}}};
  testing::TempDir dir("probs");
  WriteProbabilityFile(ref, dir / "r.jsonl");
  const ProbabilityFile back = ReadProbabilityFile(dir / "r.jsonl");
  EXPECT_EQ(back.scenes, ref.scenes);
  const KlResult r = KlBetween(back, gen, {"n"});
  EXPECT_NEAR(r.mean, 0.143841, 1e-6);
  EXPECT_FALSE(r.floored);
  EXPECT_TRUE(KlBetween(ref, gen).floored);
}

}  // namespace
}  // namespace audiorel
