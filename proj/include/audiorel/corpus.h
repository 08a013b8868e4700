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

#ifndef AUDIOREL_CORPUS_H_
#define AUDIOREL_CORPUS_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace audiorel {

inline constexpr int kNumClasses = 25;
inline constexpr int kClassesPerMainCategory = 5;
inline constexpr int kNumSubRelations = 11;
inline constexpr int kTemplatesPerRelation = 5;

enum class MainCategory { kHuman, kAnimal, kMachinery, kHumanObject, kObjectObject };

enum class MainRelation { kTemporalOrder, kSpatialDistance, kCount, kCompositionality };

// Ordinal values are stable; they index tables and seed per-relation RNGs.
enum class SubRelation {
  kBefore,
  kAfter,
  kSimultaneity,
  kCloseFirst,
  kFarFirst,
  kEqualDist,
  kCount,
  kAnd,
  kOr,
  kNot,
  kIfThenElse,
};

enum class CategoryConstraint { kInterCategory, kIntraCategory, kUnconstrained };

inline constexpr std::array<SubRelation, kNumSubRelations> kAllSubRelations = {
    SubRelation::kBefore,    SubRelation::kAfter,    SubRelation::kSimultaneity,
    SubRelation::kCloseFirst, SubRelation::kFarFirst, SubRelation::kEqualDist,
    SubRelation::kCount,     SubRelation::kAnd,      SubRelation::kOr,
    SubRelation::kNot,       SubRelation::kIfThenElse};

inline constexpr std::array<MainRelation, 4> kAllMainRelations = {
    MainRelation::kTemporalOrder, MainRelation::kSpatialDistance,
    MainRelation::kCount, MainRelation::kCompositionality};

std::string_view MainCategoryName(MainCategory category);
std::optional<MainCategory> ParseMainCategory(std::string_view name);
std::string_view MainRelationName(MainRelation relation);
std::optional<MainRelation> ParseMainRelation(std::string_view name);
std::string_view SubRelationName(SubRelation relation);
std::optional<SubRelation> ParseSubRelation(std::string_view name);
std::string_view CategoryConstraintName(CategoryConstraint constraint);
std::optional<CategoryConstraint> ParseCategoryConstraint(std::string_view name);

inline int Index(SubRelation relation) { return static_cast<int>(relation); }
inline int Index(MainRelation relation) { return static_cast<int>(relation); }

bool IsSpatial(SubRelation relation);

struct AudioEventClass {
  int id = 0;
  MainCategory main_category = MainCategory::kHuman;
  std::string label;
};

struct RelationSpec {
  SubRelation sub_relation = SubRelation::kBefore;
  MainRelation main_relation = MainRelation::kTemporalOrder;
  int min_events = 2;
  int max_events = 2;
  CategoryConstraint constraint = CategoryConstraint::kUnconstrained;

  bool AcceptsArity(int n) const { return n >= min_events && n <= max_events; }
};

// The fixed arity/constraint table every corpus config must agree with.
RelationSpec CanonicalRelationSpec(SubRelation relation);

// Placeholders: {A} {B} {C} name events in prompt order; count templates use
// {N} for the event count and {EVENTS} for the "x, y and z" list.
struct PromptTemplate {
  SubRelation relation = SubRelation::kBefore;
  int index = 0;
  std::string text;
};

// Immutable bundle of the category corpus, relation corpus and templates.
class Corpus {
 public:
  Corpus(std::vector<AudioEventClass> classes,
         std::vector<RelationSpec> relations,
         std::vector<PromptTemplate> templates,
         std::optional<std::filesystem::path> seed_dir);

  const std::vector<AudioEventClass>& classes() const { return classes_; }
  const std::vector<RelationSpec>& relations() const { return relations_; }
  const std::vector<PromptTemplate>& templates() const { return templates_; }
  const std::optional<std::filesystem::path>& seed_dir() const {
    return seed_dir_;
  }

  const AudioEventClass& Class(int id) const;
  std::optional<int> FindClass(std::string_view label) const;
  const RelationSpec& Relation(SubRelation relation) const;
  const PromptTemplate& Template(SubRelation relation, int index) const;

 private:
  std::vector<AudioEventClass> classes_;  // indexed by id
  std::vector<RelationSpec> relations_;   // indexed by SubRelation
  std::vector<PromptTemplate> templates_;
  std::optional<std::filesystem::path> seed_dir_;
};

// Parses a corpus config document. Relative seed_dir entries resolve against
// base_dir. Throws ValidationError on any invariant violation.
Corpus ParseCorpus(std::string_view json_text,
                   const std::filesystem::path& base_dir = {});

// Every failure, including malformed content, surfaces as ConfigError.
Corpus LoadCorpus(const std::filesystem::path& config_path);

// The config shipped with the project (data/corpus.json), compiled in.
std::string_view DefaultCorpusJson();
Corpus DefaultCorpus();

// Joins labels as "a", "a and b", "a, b and c".
std::string JoinEventList(std::span<const std::string> labels);

std::string RenderPrompt(const Corpus& corpus, SubRelation relation,
                         std::span<const int> event_classes,
                         int template_index);

}  // namespace audiorel

#endif  // AUDIOREL_CORPUS_H_
