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

#include "audiorel/report.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "audiorel/errors.h"
#include "audiorel/random.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_support.h"

namespace audiorel {
namespace {

using nlohmann::json;

// A report with awkward, non-round numbers in every field.
EvalReport SampleReport() {
  Rng rng = MakeRng({21});
  EvalReport r;
  r.num_scenes = 22;
  auto means = [&](int n) {
    return StageMeans{n, UniformUnit(rng), UniformUnit(rng), UniformUnit(rng),
                      UniformUnit(rng) / 3.0};
  };
  r.overall = means(22);
  for (SubRelation s : kAllSubRelations) r.by_sub_relation[s] = means(2);
  for (MainRelation m : kAllMainRelations) r.by_main_relation[m] = means(5);
  for (double s : r.config.thresholds) {
    ThresholdResult t{s, UniformUnit(rng), UniformUnit(rng), UniformUnit(rng),
                      UniformUnit(rng), {}, {}};
    for (int i = 0; i < r.num_scenes; ++i) {
      t.per_scene.push_back({UniformUnit(rng), 1.0, std::exp(-0.1 * i)});
      t.reference.push_back(i % 3 - 1);
    }
    r.per_threshold.push_back(t);
  }
  for (int i = 0; i < r.num_scenes; ++i) {
    r.scene_ids.push_back("scene_" + std::to_string(i));
    r.scene_relations.push_back(kAllSubRelations[i % 11]);
  }
  r.missing_detections = {"scene_3"};
  r.general.fd = 12.345678901234567;
  r.general.kl = 0.1438410362258904;
  r.general.kl_floored = true;
  r.notes = {"a note"};
  return r;
}

std::vector<double> NumbersAfter(const std::string& text, const std::string& row_label) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first != row_label) continue;
    std::vector<double> values;
    std::string token;
    while (fields >> token) values.push_back(std::strtod(token.c_str(), nullptr));
    return values;
  }
  return {};
}

TEST(ReportTest, FormatNumberRoundTrips) {
  Rng rng = MakeRng({1});
  for (int i = 0; i < 10000; ++i) {
    const double x = UniformReal(rng, -1e3, 1e3) * std::pow(10.0, UniformInt(rng, -12, 6));
    EXPECT_EQ(std::strtod(FormatNumber(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(FormatNumber(1.0), "1");
  EXPECT_EQ(FormatNumber(0.5), "0.5");
}

TEST(ReportTest, JsonRoundTripIsExact) {
  const EvalReport r = SampleReport();
  const EvalReport back = ReportFromJson(ReportToJson(r));
  EXPECT_EQ(back.num_scenes, r.num_scenes);
  EXPECT_EQ(back.overall.msr, r.overall.msr);
  EXPECT_EQ(back.config.thresholds, r.config.thresholds);
  for (SubRelation s : kAllSubRelations) {
    EXPECT_EQ(back.by_sub_relation.at(s).presence, r.by_sub_relation.at(s).presence);
    EXPECT_EQ(back.by_sub_relation.at(s).msr, r.by_sub_relation.at(s).msr);
  }
  for (size_t k = 0; k < r.per_threshold.size(); ++k) {
    EXPECT_EQ(back.per_threshold[k].amsr, r.per_threshold[k].amsr);
    EXPECT_EQ(back.per_threshold[k].reference, r.per_threshold[k].reference);
    for (size_t i = 0; i < r.scene_ids.size(); ++i) {
      EXPECT_EQ(back.per_threshold[k].per_scene[i].parsimony,
                r.per_threshold[k].per_scene[i].parsimony);
    }
  }
  EXPECT_EQ(back.scene_relations, r.scene_relations);
  EXPECT_EQ(back.general.fd, r.general.fd);
  EXPECT_FALSE(back.general.fad);
  EXPECT_EQ(back.general.kl_floored, true);
  EXPECT_EQ(back.missing_detections, r.missing_detections);
  EXPECT_EQ(ReportToJson(back), ReportToJson(r));
  EXPECT_THROW(ReportFromJson("{}"), ValidationError);
}

TEST(ReportTest, TableNumbersEqualJsonFields) {
  const EvalReport r = SampleReport();
  const json j = json::parse(ReportToJson(r));
  const std::string text = RenderTables(r);
  for (SubRelation s : kAllSubRelations) {
    const std::string name(SubRelationName(s));
    const auto row = NumbersAfter(text, name);
    ASSERT_EQ(row.size(), 5u) << name;
    const json& field = j["by_sub_relation"][name];
    EXPECT_EQ(row[0], field["scenes"].get<double>());
    EXPECT_EQ(row[1], field["mAPre"].get<double>());
    EXPECT_EQ(row[2], field["mARel"].get<double>());
    EXPECT_EQ(row[3], field["mAPar"].get<double>());
    EXPECT_EQ(row[4], field["mAMSR"].get<double>());
  }
  for (const char* stage : {"mAPre", "mARel", "mAPar", "mAMSR"}) {
    const auto row = NumbersAfter(text, stage);
    ASSERT_EQ(row.size(), 4u) << stage;
    for (size_t m = 0; m < 4; ++m) {
      const std::string name(MainRelationName(kAllMainRelations[m]));
      EXPECT_EQ(row[m], j["by_main_relation"][name][stage].get<double>());
    }
  }
  const auto overall = NumbersAfter(text, "all");
  ASSERT_EQ(overall.size(), 5u);
  EXPECT_EQ(overall[4], j["overall"]["mAMSR"].get<double>());
  EXPECT_EQ(NumbersAfter(text, "FD").at(0), j["general"]["fd"].get<double>());
}

TEST(ReportTest, LayoutHasElevenRowsAndFourColumns) {
  const std::string text = RenderTables(SampleReport());
  for (SubRelation s : kAllSubRelations) {
    EXPECT_FALSE(NumbersAfter(text, std::string(SubRelationName(s))).empty());
  }
  for (MainRelation m : kAllMainRelations) {
    EXPECT_NE(text.find(std::string(MainRelationName(m))), std::string::npos);
  }
  const std::string tsv = RelationTsv(SampleReport());
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 12);
}

TEST(ReportTest, MissingGroupsRenderAsDashes) {
  EvalReport r = SampleReport();
  r.by_sub_relation.erase(SubRelation::kNot);
  r.by_main_relation.erase(MainRelation::kCount);
  const std::string text = RenderTables(r);
  std::istringstream lines(text);
  std::string line;
  int dash_rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string label, n, rest;
    fields >> label >> n >> rest;
    if (label == "not") {
      EXPECT_EQ(n, "0");
      EXPECT_EQ(rest, "-");
    }
    if (label == "mAMSR") dash_rows += static_cast<int>(std::count(line.begin(), line.end(), '-'));
  }
  EXPECT_EQ(dash_rows, 1);
  EXPECT_EQ(NumbersAfter(RelationTsv(r), "not").size(), 0u);
}

TEST(ReportTest, WritesAllFiles) {
  testing::TempDir dir("report");
  WriteReportFiles(SampleReport(), dir / "out");
  for (const char* name : {"report.json", "report.txt", "relations.tsv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / name)) << name;
  }
  testing::WriteFile(dir / "file", "x");
  EXPECT_THROW(WriteReportFiles(SampleReport(), dir / "file" / "sub"), IoError);
}

}  // namespace
}  // namespace audiorel
