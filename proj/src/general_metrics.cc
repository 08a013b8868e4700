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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "audiorel/errors.h"
#include "json.hpp"

namespace audiorel {
namespace {

using nlohmann::json;

constexpr double kProbabilityFloor = 1e-12;
constexpr double kSumTolerance = 1e-6;

// Symmetric PSD square root by eigendecomposition, clamping tiny negative
// eigenvalues.
Eigen::MatrixXd SqrtPsd(const Eigen::MatrixXd& m, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition failed");
  }
  Eigen::VectorXd values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -tolerance * scale) {
      throw ValidationError("matrix square root failed: eigenvalue " +
                            std::to_string(values[i]) + " is not PSD");
    }
    values[i] = std::sqrt(std::max(values[i], 0.0));
  }
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

bool Blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

json ParseLine(std::string_view line, size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError("line " + std::to_string(line_no) +
                          ": invalid JSON (" + e.what() + ")");
  }
}

std::vector<double> NumberList(const json& node, const std::string& where) {
  if (!node.is_array()) throw ValidationError(where + ": expected a list");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) throw ValidationError(where + ": non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

GaussianStats EstimateGaussian(const EmbeddingSet& set) {
  const auto n = set.vectors.rows();
  if (n < 2) {
    throw ValidationError("embedding set '" + set.source +
                          "' needs at least 2 vectors for a covariance");
  }
  GaussianStats stats;
  stats.mean = set.vectors.colwise().mean().transpose();
  const Eigen::MatrixXd centred = set.vectors.rowwise() - stats.mean.transpose();
  stats.covariance = (centred.transpose() * centred) / static_cast<double>(n - 1);
  return stats;
}

double FrechetDistance(const GaussianStats& a, const GaussianStats& b,
                       double eig_tolerance) {
  if (a.mean.size() != b.mean.size()) {
    throw ValidationError("embedding dimension mismatch: " +
                          std::to_string(a.mean.size()) + " vs " +
                          std::to_string(b.mean.size()));
  }
  const Eigen::MatrixXd root_a = SqrtPsd(a.covariance, eig_tolerance);
  Eigen::MatrixXd inner = root_a * b.covariance * root_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw ValidationError("eigendecomposition failed");
  }
  const Eigen::VectorXd values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  double trace_root = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -eig_tolerance * scale) {
      throw ValidationError("matrix square root failed: negative eigenvalue " +
                            std::to_string(values[i]));
    }
    trace_root += std::sqrt(std::max(values[i], 0.0));
  }
  const double mean_term = (a.mean - b.mean).squaredNorm();
  const double fd = mean_term + a.covariance.trace() + b.covariance.trace() -
                    2.0 * trace_root;
  // Round-off can leave a tiny negative value for identical inputs.
  return std::max(fd, 0.0);
}

double FrechetDistance(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.vectors.cols() != b.vectors.cols()) {
    throw ValidationError("embedding dimension mismatch: " +
                          std::to_string(a.vectors.cols()) + " vs " +
                          std::to_string(b.vectors.cols()));
  }
  return FrechetDistance(EstimateGaussian(a), EstimateGaussian(b));
}

KlResult KlScore(std::span<const std::vector<double>> p,
                 std::span<const std::vector<double>> q) {
  if (p.size() != q.size()) throw ValidationError("KL: pair count mismatch");
  if (p.empty()) throw ValidationError("KL: no pairs");
  KlResult result;
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != q[i].size()) {
      throw ValidationError("KL: pair " + std::to_string(i) + " shape mismatch");
    }
    double sum_p = 0.0, sum_q = 0.0;
    for (size_t k = 0; k < p[i].size(); ++k) {
      if (p[i][k] < 0.0 || q[i][k] < 0.0) {
        throw ValidationError("KL: negative probability in pair " +
                              std::to_string(i));
      }
      sum_p += p[i][k];
      sum_q += q[i][k];
    }
    if (std::abs(sum_p - 1.0) > kSumTolerance ||
        std::abs(sum_q - 1.0) > kSumTolerance) {
      throw ValidationError("KL: pair " + std::to_string(i) +
                            " is not normalized");
    }
    double kl = 0.0;
    for (size_t k = 0; k < p[i].size(); ++k) {
      if (p[i][k] == 0.0) continue;
      double qk = q[i][k];
      if (qk < kProbabilityFloor) {
        qk = kProbabilityFloor;
        result.floored = true;
      }
      kl += p[i][k] * std::log(p[i][k] / qk);
    }
    total += kl;
  }
  result.mean = total / p.size();
  return result;
}

EmbeddingFile ParseEmbeddingFile(std::string_view text) {
  EmbeddingFile file;
  bool have_header = false;
  const auto lines = Lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    const size_t line_no = i + 1;
    const std::string where = "line " + std::to_string(line_no);
    const json node = ParseLine(lines[i], line_no);
    if (!have_header) {
      if (!node.is_object() || !node.contains("dimension") ||
          !node["dimension"].is_number_integer() || node["dimension"].get<int>() < 1) {
        throw ValidationError(where + ": header must declare a positive 'dimension'");
      }
      file.dimension = node["dimension"].get<int>();
      file.source = node.value("source", "");
      have_header = true;
      continue;
    }
    if (!node.is_object() || !node.contains("scene_id") ||
        !node["scene_id"].is_string() || !node.contains("vectors") ||
        !node["vectors"].is_array()) {
      throw ValidationError(where + ": record needs 'scene_id' and 'vectors'");
    }
    std::vector<std::vector<double>> vectors;
    for (size_t v = 0; v < node["vectors"].size(); ++v) {
      const std::string vw = where + ", vector " + std::to_string(v);
      auto values = NumberList(node["vectors"][v], vw);
      if (static_cast<int>(values.size()) != file.dimension) {
        throw ValidationError(vw + ": length " + std::to_string(values.size()) +
                              " differs from header dimension " +
                              std::to_string(file.dimension));
      }
      vectors.push_back(std::move(values));
    }
    file.scenes.emplace_back(node["scene_id"].get<std::string>(), std::move(vectors));
  }
  if (!have_header) throw ValidationError("embedding file has no header line");
  return file;
}

EmbeddingFile ReadEmbeddingFile(const std::filesystem::path& path) {
  try {
    return ParseEmbeddingFile(ReadText(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteEmbeddingFile(const EmbeddingFile& file,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << json{{"dimension", file.dimension}, {"source", file.source}}.dump() << "\n";
  for (const auto& [id, vectors] : file.scenes) {
    out << json{{"scene_id", id}, {"vectors", vectors}}.dump() << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

ProbabilityFile ParseProbabilityFile(std::string_view text) {
  ProbabilityFile file;
  bool have_header = false;
  const auto lines = Lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    const size_t line_no = i + 1;
    const std::string where = "line " + std::to_string(line_no);
    const json node = ParseLine(lines[i], line_no);
    if (!have_header) {
      if (!node.is_object() || !node.contains("num_classes") ||
          !node["num_classes"].is_number_integer() ||
          node["num_classes"].get<int>() < 1) {
        throw ValidationError(where + ": header must declare a positive 'num_classes'");
      }
      file.num_classes = node["num_classes"].get<int>();
      file.source = node.value("source", "");
      have_header = true;
      continue;
    }
    if (!node.is_object() || !node.contains("scene_id") ||
        !node["scene_id"].is_string() || !node.contains("probs")) {
      throw ValidationError(where + ": record needs 'scene_id' and 'probs'");
    }
    auto probs = NumberList(node["probs"], where);
    if (static_cast<int>(probs.size()) != file.num_classes) {
      throw ValidationError(where + ": expected " +
                            std::to_string(file.num_classes) + " probabilities");
    }
    file.scenes.emplace_back(node["scene_id"].get<std::string>(), std::move(probs));
  }
  if (!have_header) throw ValidationError("probability file has no header line");
  return file;
}

ProbabilityFile ReadProbabilityFile(const std::filesystem::path& path) {
  try {
    return ParseProbabilityFile(ReadText(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void WriteProbabilityFile(const ProbabilityFile& file,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << json{{"num_classes", file.num_classes}, {"source", file.source}}.dump()
      << "\n";
  for (const auto& [id, probs] : file.scenes) {
    out << json{{"scene_id", id}, {"probs", probs}}.dump() << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingSet CollectEmbeddings(const EmbeddingFile& file,
                               const std::set<std::string>& exclude) {
  size_t rows = 0;
  for (const auto& [id, vectors] : file.scenes) {
    if (!exclude.count(id)) rows += vectors.size();
  }
  EmbeddingSet set;
  set.source = file.source;
  set.vectors.resize(static_cast<Eigen::Index>(rows), file.dimension);
  Eigen::Index r = 0;
  for (const auto& [id, vectors] : file.scenes) {
    if (exclude.count(id)) continue;
    for (const auto& v : vectors) {
      for (int c = 0; c < file.dimension; ++c) set.vectors(r, c) = v[c];
      ++r;
    }
  }
  return set;
}

KlResult KlBetween(const ProbabilityFile& reference,
                   const ProbabilityFile& generated,
                   const std::set<std::string>& exclude) {
  if (reference.num_classes != generated.num_classes) {
    throw ValidationError("KL: class count mismatch between files");
  }
  std::map<std::string, const std::vector<double>*> by_id;
  for (const auto& [id, probs] : generated.scenes) by_id[id] = &probs;
  std::vector<std::vector<double>> p, q;
  for (const auto& [id, probs] : reference.scenes) {
    if (exclude.count(id)) continue;
    const auto it = by_id.find(id);
    if (it == by_id.end()) continue;
    p.push_back(probs);
    q.push_back(*it->second);
  }
  return KlScore(p, q);
}

}  // namespace audiorel
