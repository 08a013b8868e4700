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

#include "audiorel/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "audiorel/errors.h"
#include "json.hpp"

namespace audiorel {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kMainCategoryNames = {
    "Human", "Animal", "Machinery", "HumanObject", "ObjectObject"};
constexpr std::array<std::string_view, 4> kMainRelationNames = {
    "TemporalOrder", "SpatialDistance", "Count", "Compositionality"};
constexpr std::array<std::string_view, kNumSubRelations> kSubRelationNames = {
    "before", "after", "simultaneity", "closefirst", "farfirst", "equaldist",
    "count",  "and",   "or",           "not",        "ifthenelse"};
constexpr std::array<std::string_view, 3> kConstraintNames = {
    "inter-category", "intra-category", "unconstrained"};

template <typename Enum, size_t N>
std::optional<Enum> ParseName(const std::array<std::string_view, N>& names,
                              std::string_view name) {
  for (size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

struct PlaceholderRule {
  std::vector<std::string> allowed;
  std::vector<std::string> required;
};

PlaceholderRule PlaceholdersFor(SubRelation relation) {
  switch (relation) {
    case SubRelation::kCount:
      return {{"{N}", "{EVENTS}"}, {"{N}", "{EVENTS}"}};
    case SubRelation::kNot:
      return {{"{A}"}, {"{A}"}};
    case SubRelation::kIfThenElse:
      return {{"{A}", "{B}", "{C}"}, {"{A}", "{B}", "{C}"}};
    case SubRelation::kCloseFirst:
    case SubRelation::kFarFirst:
    case SubRelation::kEqualDist:
      // Both events share a class, so naming it once is enough.
      return {{"{A}", "{B}"}, {"{A}"}};
    default:
      return {{"{A}", "{B}"}, {"{A}", "{B}"}};
  }
}

// Returns every "{...}" token in order of appearance.
std::vector<std::string> Placeholders(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    const size_t close = text.find('}', pos);
    if (close == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      break;
    }
    out.emplace_back(text.substr(pos, close - pos + 1));
    pos = close + 1;
  }
  return out;
}

void ValidateTemplate(const PromptTemplate& tmpl) {
  const PlaceholderRule rule = PlaceholdersFor(tmpl.relation);
  const auto found = Placeholders(tmpl.text);
  std::ostringstream where;
  where << "template " << SubRelationName(tmpl.relation) << "[" << tmpl.index
        << "]";
  for (const auto& p : found) {
    if (std::find(rule.allowed.begin(), rule.allowed.end(), p) ==
        rule.allowed.end()) {
      throw ValidationError(where.str() + ": unknown placeholder " + p);
    }
  }
  for (const auto& p : rule.required) {
    if (std::find(found.begin(), found.end(), p) == found.end()) {
      throw ValidationError(where.str() + ": missing placeholder " + p);
    }
  }
}

void ReplaceAll(std::string& text, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

template <typename T>
T Field(const json& node, const char* key, const std::string& where) {
  if (!node.is_object() || !node.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return node.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view MainCategoryName(MainCategory category) {
  return kMainCategoryNames[static_cast<size_t>(category)];
}
std::optional<MainCategory> ParseMainCategory(std::string_view name) {
  return ParseName<MainCategory>(kMainCategoryNames, name);
}
std::string_view MainRelationName(MainRelation relation) {
  return kMainRelationNames[static_cast<size_t>(relation)];
}
std::optional<MainRelation> ParseMainRelation(std::string_view name) {
  return ParseName<MainRelation>(kMainRelationNames, name);
}
std::string_view SubRelationName(SubRelation relation) {
  return kSubRelationNames[static_cast<size_t>(relation)];
}
std::optional<SubRelation> ParseSubRelation(std::string_view name) {
  return ParseName<SubRelation>(kSubRelationNames, name);
}
std::string_view CategoryConstraintName(CategoryConstraint constraint) {
  return kConstraintNames[static_cast<size_t>(constraint)];
}
std::optional<CategoryConstraint> ParseCategoryConstraint(
    std::string_view name) {
  return ParseName<CategoryConstraint>(kConstraintNames, name);
}

bool IsSpatial(SubRelation relation) {
  return relation == SubRelation::kCloseFirst ||
         relation == SubRelation::kFarFirst ||
         relation == SubRelation::kEqualDist;
}

RelationSpec CanonicalRelationSpec(SubRelation relation) {
  RelationSpec spec;
  spec.sub_relation = relation;
  switch (relation) {
    case SubRelation::kBefore:
    case SubRelation::kAfter:
    case SubRelation::kSimultaneity:
      spec.main_relation = MainRelation::kTemporalOrder;
      break;
    case SubRelation::kCloseFirst:
    case SubRelation::kFarFirst:
    case SubRelation::kEqualDist:
      spec.main_relation = MainRelation::kSpatialDistance;
      spec.constraint = CategoryConstraint::kIntraCategory;
      break;
    case SubRelation::kCount:
      spec.main_relation = MainRelation::kCount;
      spec.min_events = 2;
      spec.max_events = 5;
      spec.constraint = CategoryConstraint::kInterCategory;
      break;
    case SubRelation::kAnd:
    case SubRelation::kOr:
      spec.main_relation = MainRelation::kCompositionality;
      break;
    case SubRelation::kNot:
      spec.main_relation = MainRelation::kCompositionality;
      spec.min_events = spec.max_events = 1;
      break;
    case SubRelation::kIfThenElse:
      spec.main_relation = MainRelation::kCompositionality;
      spec.min_events = spec.max_events = 3;
      break;
  }
  return spec;
}

Corpus::Corpus(std::vector<AudioEventClass> classes,
               std::vector<RelationSpec> relations,
               std::vector<PromptTemplate> templates,
               std::optional<std::filesystem::path> seed_dir)
    : classes_(std::move(classes)),
      relations_(std::move(relations)),
      templates_(std::move(templates)),
      seed_dir_(std::move(seed_dir)) {
  if (classes_.size() != kNumClasses) {
    throw ValidationError("category corpus incomplete: expected " +
                          std::to_string(kNumClasses) + " classes, got " +
                          std::to_string(classes_.size()));
  }
  std::sort(classes_.begin(), classes_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::array<int, 5> per_main{};
  std::set<std::string> labels;
  for (int i = 0; i < kNumClasses; ++i) {
    const auto& c = classes_[i];
    if (c.id != i) {
      throw ValidationError("class ids must be unique and dense in 0.." +
                            std::to_string(kNumClasses - 1) +
                            "; offending id " + std::to_string(c.id));
    }
    if (c.label.empty() || !labels.insert(c.label).second) {
      throw ValidationError("duplicate or empty class label '" + c.label + "'");
    }
    ++per_main[static_cast<size_t>(c.main_category)];
  }
  for (size_t m = 0; m < per_main.size(); ++m) {
    if (per_main[m] != kClassesPerMainCategory) {
      throw ValidationError(
          "category corpus incomplete: main category " +
          std::string(kMainCategoryNames[m]) + " has " +
          std::to_string(per_main[m]) + " sub-categories");
    }
  }

  if (relations_.size() != kNumSubRelations) {
    throw ValidationError("relation corpus must list all " +
                          std::to_string(kNumSubRelations) + " sub-relations");
  }
  std::sort(relations_.begin(), relations_.end(),
            [](const auto& a, const auto& b) {
              return Index(a.sub_relation) < Index(b.sub_relation);
            });
  for (int i = 0; i < kNumSubRelations; ++i) {
    const RelationSpec& r = relations_[i];
    if (Index(r.sub_relation) != i) {
      throw ValidationError("duplicate relation entry '" +
                            std::string(SubRelationName(r.sub_relation)) + "'");
    }
    const RelationSpec canon = CanonicalRelationSpec(r.sub_relation);
    if (r.main_relation != canon.main_relation ||
        r.min_events != canon.min_events || r.max_events != canon.max_events ||
        r.constraint != canon.constraint) {
      throw ValidationError("relation '" +
                            std::string(SubRelationName(r.sub_relation)) +
                            "' disagrees with its fixed arity/constraint");
    }
  }

  std::array<std::array<bool, kTemplatesPerRelation>, kNumSubRelations> seen{};
  for (const auto& t : templates_) {
    if (t.index < 0 || t.index >= kTemplatesPerRelation) {
      throw ValidationError("template index out of range for relation '" +
                            std::string(SubRelationName(t.relation)) + "'");
    }
    bool& slot = seen[Index(t.relation)][t.index];
    if (slot) throw ValidationError("duplicate template entry");
    slot = true;
    ValidateTemplate(t);
  }
  if (templates_.size() != kNumSubRelations * kTemplatesPerRelation) {
    throw ValidationError("every relation needs exactly " +
                          std::to_string(kTemplatesPerRelation) + " templates");
  }
  std::sort(templates_.begin(), templates_.end(),
            [](const auto& a, const auto& b) {
              return std::pair(Index(a.relation), a.index) <
                     std::pair(Index(b.relation), b.index);
            });
}

const AudioEventClass& Corpus::Class(int id) const {
  if (id < 0 || id >= kNumClasses) {
    throw ValidationError("unknown class id " + std::to_string(id));
  }
  return classes_[id];
}

std::optional<int> Corpus::FindClass(std::string_view label) const {
  for (const auto& c : classes_) {
    if (c.label == label) return c.id;
  }
  return std::nullopt;
}

const RelationSpec& Corpus::Relation(SubRelation relation) const {
  return relations_[Index(relation)];
}

const PromptTemplate& Corpus::Template(SubRelation relation, int index) const {
  if (index < 0 || index >= kTemplatesPerRelation) {
    throw ValidationError("template index " + std::to_string(index) +
                          " out of range 0.." +
                          std::to_string(kTemplatesPerRelation - 1));
  }
  return templates_[Index(relation) * kTemplatesPerRelation + index];
}

Corpus ParseCorpus(std::string_view json_text,
                   const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("corpus config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object()) throw ValidationError("corpus config must be an object");

  std::vector<AudioEventClass> classes;
  const json& class_list = doc.value("classes", json::array());
  if (!class_list.is_array()) throw ValidationError("'classes' must be a list");
  for (size_t i = 0; i < class_list.size(); ++i) {
    const std::string where = "classes[" + std::to_string(i) + "]";
    const json& node = class_list[i];
    AudioEventClass c;
    c.id = Field<int>(node, "id", where);
    c.label = Field<std::string>(node, "label", where);
    const auto main = ParseMainCategory(Field<std::string>(node, "main", where));
    if (!main) throw ValidationError(where + ": unknown main category");
    c.main_category = *main;
    classes.push_back(std::move(c));
  }
  // Check duplicates before the size check so the message names the problem.
  std::set<int> ids;
  for (const auto& c : classes) {
    if (!ids.insert(c.id).second) {
      throw ValidationError("duplicate class id " + std::to_string(c.id));
    }
  }

  std::vector<RelationSpec> relations;
  const json& relation_list = doc.value("relations", json::array());
  if (!relation_list.is_array()) {
    throw ValidationError("'relations' must be a list");
  }
  for (size_t i = 0; i < relation_list.size(); ++i) {
    const std::string where = "relations[" + std::to_string(i) + "]";
    const json& node = relation_list[i];
    RelationSpec r;
    const std::string sub = Field<std::string>(node, "sub", where);
    const auto sub_rel = ParseSubRelation(sub);
    if (!sub_rel) throw ValidationError(where + ": unknown relation '" + sub + "'");
    r.sub_relation = *sub_rel;
    const auto main = ParseMainRelation(Field<std::string>(node, "main", where));
    if (!main) throw ValidationError(where + ": unknown main relation");
    r.main_relation = *main;
    r.min_events = Field<int>(node, "min_events", where);
    r.max_events = Field<int>(node, "max_events", where);
    const auto constraint =
        ParseCategoryConstraint(Field<std::string>(node, "constraint", where));
    if (!constraint) throw ValidationError(where + ": unknown constraint");
    r.constraint = *constraint;
    relations.push_back(r);
  }

  std::vector<PromptTemplate> templates;
  const json& template_map = doc.value("templates", json::object());
  if (!template_map.is_object()) {
    throw ValidationError("'templates' must map relation names to lists");
  }
  for (const auto& [name, list] : template_map.items()) {
    const auto rel = ParseSubRelation(name);
    if (!rel) {
      throw ValidationError("template references unknown relation '" + name +
                            "'");
    }
    if (!list.is_array() || list.size() != kTemplatesPerRelation) {
      throw ValidationError("relation '" + name + "' must have exactly " +
                            std::to_string(kTemplatesPerRelation) +
                            " templates");
    }
    for (size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_string()) {
        throw ValidationError("template " + name + "[" + std::to_string(i) +
                              "] must be a string");
      }
      templates.push_back({*rel, static_cast<int>(i), list[i].get<std::string>()});
    }
  }

  std::optional<std::filesystem::path> seed_dir;
  if (doc.contains("seed_dir")) {
    if (!doc["seed_dir"].is_string()) {
      throw ValidationError("'seed_dir' must be a string");
    }
    std::filesystem::path p = doc["seed_dir"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    seed_dir = p;
  }
  return Corpus(std::move(classes), std::move(relations), std::move(templates),
                std::move(seed_dir));
}

Corpus LoadCorpus(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    throw ConfigError("cannot open corpus config " + config_path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::optional<Corpus> parsed;
  try {
    parsed.emplace(ParseCorpus(buffer.str(), config_path.parent_path()));
  } catch (const ValidationError& e) {
    throw ConfigError(config_path.string() + ": " + e.what());
  }
  Corpus& corpus = *parsed;
  if (corpus.seed_dir() && !std::filesystem::is_directory(*corpus.seed_dir())) {
    throw ConfigError("seed-audio directory " + corpus.seed_dir()->string() +
                      " referenced by " + config_path.string() +
                      " does not exist");
  }
  return corpus;
}

Corpus DefaultCorpus() { return ParseCorpus(DefaultCorpusJson()); }

std::string JoinEventList(std::span<const std::string> labels) {
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += (i + 1 == labels.size()) ? " and " : ", ";
    out += labels[i];
  }
  return out;
}

std::string RenderPrompt(const Corpus& corpus, SubRelation relation,
                         std::span<const int> event_classes,
                         int template_index) {
  const RelationSpec& spec = corpus.Relation(relation);
  const int n = static_cast<int>(event_classes.size());
  if (!spec.AcceptsArity(n)) {
    throw ValidationError("relation '" + std::string(SubRelationName(relation)) +
                          "' takes " + std::to_string(spec.min_events) + ".." +
                          std::to_string(spec.max_events) + " events, got " +
                          std::to_string(n));
  }
  std::string text = corpus.Template(relation, template_index).text;
  std::vector<std::string> labels;
  for (int id : event_classes) labels.push_back(corpus.Class(id).label);

  if (relation == SubRelation::kCount) {
    ReplaceAll(text, "{N}", std::to_string(n));
    ReplaceAll(text, "{EVENTS}", JoinEventList(labels));
    return text;
  }
  static constexpr std::array<std::string_view, 3> kSlots = {"{A}", "{B}", "{C}"};
  for (int i = 0; i < n; ++i) ReplaceAll(text, kSlots[i], labels[i]);
  return text;
}

}  // namespace audiorel
