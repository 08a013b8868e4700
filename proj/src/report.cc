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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "audiorel/errors.h"
#include "json.hpp"

namespace audiorel {
namespace {

using nlohmann::json;

json MeansToJson(const StageMeans& m) {
  return json{{"scenes", m.scenes},
              {"mAPre", m.presence},
              {"mARel", m.relation},
              {"mAPar", m.parsimony},
              {"mAMSR", m.msr}};
}

StageMeans MeansFromJson(const json& j) {
  return {j.at("scenes").get<int>(), j.at("mAPre").get<double>(),
          j.at("mARel").get<double>(), j.at("mAPar").get<double>(),
          j.at("mAMSR").get<double>()};
}

std::string Pad(std::string_view text, size_t width) {
  std::string out(text);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

std::string MeansRow(std::string_view name, const StageMeans& m) {
  return Pad(name, 18) + Pad(std::to_string(m.scenes), 6) +
         Pad(FormatNumber(m.presence), 24) + Pad(FormatNumber(m.relation), 24) +
         Pad(FormatNumber(m.parsimony), 24) + FormatNumber(m.msr) + "\n";
}

std::string MeansHeader(std::string_view first) {
  return Pad(first, 18) + Pad("N", 6) + Pad("mAPre", 24) + Pad("mARel", 24) +
         Pad("mAPar", 24) + "mAMSR\n";
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string ReportToJson(const EvalReport& r) {
  json j;
  j["num_scenes"] = r.num_scenes;
  j["num_thresholds"] = r.config.thresholds.size();
  j["thresholds"] = r.config.thresholds;
  j["w_s"] = r.config.w_s;
  j["params"] = {{"sigma1", r.params.sigma1},
                 {"sigma2", r.params.sigma2},
                 {"overlap_fraction", r.params.overlap_fraction},
                 {"order_tolerance", r.params.order_tolerance}};
  j["overall"] = MeansToJson(r.overall);
  j["by_main_relation"] = json::object();
  for (const auto& [rel, m] : r.by_main_relation) {
    j["by_main_relation"][std::string(MainRelationName(rel))] = MeansToJson(m);
  }
  j["by_sub_relation"] = json::object();
  for (const auto& [rel, m] : r.by_sub_relation) {
    j["by_sub_relation"][std::string(SubRelationName(rel))] = MeansToJson(m);
  }
  j["per_threshold"] = json::array();
  for (const auto& t : r.per_threshold) {
    j["per_threshold"].push_back({{"threshold", t.threshold},
                                  {"APre", t.presence},
                                  {"ARel", t.relation},
                                  {"APar", t.parsimony},
                                  {"AMSR", t.amsr}});
  }
  j["scenes"] = json::array();
  for (size_t i = 0; i < r.scene_ids.size(); ++i) {
    json scene;
    scene["scene_id"] = r.scene_ids[i];
    scene["relation"] = std::string(SubRelationName(r.scene_relations[i]));
    scene["reference"] = json::array();
    scene["scores"] = json::array();
    for (const auto& t : r.per_threshold) {
      const MsrScores& s = t.per_scene[i];
      scene["reference"].push_back(t.reference[i]);
      scene["scores"].push_back({{"presence", s.presence},
                                 {"relation", s.relation},
                                 {"parsimony", s.parsimony},
                                 {"msr", s.product()}});
    }
    j["scenes"].push_back(scene);
  }
  j["missing_detections"] = r.missing_detections;
  json general = json::object();
  if (r.general.fad) general["fad"] = *r.general.fad;
  if (r.general.fd) general["fd"] = *r.general.fd;
  if (r.general.kl) {
    general["kl"] = *r.general.kl;
    general["kl_floored"] = r.general.kl_floored;
  }
  j["general"] = general;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

EvalReport ReportFromJson(std::string_view text) {
  EvalReport r;
  try {
    const json j = json::parse(text);
    r.num_scenes = j.at("num_scenes").get<int>();
    r.config.thresholds = j.at("thresholds").get<std::vector<double>>();
    r.config.w_s = j.at("w_s").get<double>();
    const json& p = j.at("params");
    r.params = {p.at("sigma1").get<double>(), p.at("sigma2").get<double>(),
                p.at("overlap_fraction").get<double>(),
                p.at("order_tolerance").get<double>()};
    r.overall = MeansFromJson(j.at("overall"));
    for (const auto& [name, m] : j.at("by_main_relation").items()) {
      const auto rel = ParseMainRelation(name);
      if (!rel) throw ValidationError("report: unknown main relation " + name);
      r.by_main_relation[*rel] = MeansFromJson(m);
    }
    for (const auto& [name, m] : j.at("by_sub_relation").items()) {
      const auto rel = ParseSubRelation(name);
      if (!rel) throw ValidationError("report: unknown sub-relation " + name);
      r.by_sub_relation[*rel] = MeansFromJson(m);
    }
    for (const auto& t : j.at("per_threshold")) {
      ThresholdResult tr;
      tr.threshold = t.at("threshold").get<double>();
      tr.presence = t.at("APre").get<double>();
      tr.relation = t.at("ARel").get<double>();
      tr.parsimony = t.at("APar").get<double>();
      tr.amsr = t.at("AMSR").get<double>();
      r.per_threshold.push_back(tr);
    }
    for (const auto& scene : j.at("scenes")) {
      r.scene_ids.push_back(scene.at("scene_id").get<std::string>());
      const auto rel = ParseSubRelation(scene.at("relation").get<std::string>());
      if (!rel) throw ValidationError("report: unknown scene relation");
      r.scene_relations.push_back(*rel);
      const auto& scores = scene.at("scores");
      const auto& refs = scene.at("reference");
      for (size_t k = 0; k < scores.size() && k < r.per_threshold.size(); ++k) {
        r.per_threshold[k].per_scene.push_back(
            {scores[k].at("presence").get<double>(),
             scores[k].at("relation").get<double>(),
             scores[k].at("parsimony").get<double>()});
        r.per_threshold[k].reference.push_back(refs[k].get<int>());
      }
    }
    r.missing_detections = j.at("missing_detections").get<std::vector<std::string>>();
    const json& g = j.at("general");
    if (g.contains("fad")) r.general.fad = g["fad"].get<double>();
    if (g.contains("fd")) r.general.fd = g["fd"].get<double>();
    if (g.contains("kl")) {
      r.general.kl = g["kl"].get<double>();
      r.general.kl_floored = g.value("kl_floored", false);
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string RenderTables(const EvalReport& r) {
  std::ostringstream out;
  out << "Relation-aware evaluation: N=" << r.num_scenes
      << " scenes, K=" << r.config.thresholds.size()
      << " thresholds, w_s=" << FormatNumber(r.config.w_s) << "\n\n";

  out << "Overall\n" << MeansHeader("") << MeansRow("all", r.overall) << "\n";

  // Main relations as columns.
  out << "By main relation\n" << Pad("", 8);
  for (MainRelation m : kAllMainRelations) {
    out << Pad(MainRelationName(m), 24);
  }
  out << "\n";
  const std::pair<const char*, double StageMeans::*> rows[] = {
      {"mAPre", &StageMeans::presence},
      {"mARel", &StageMeans::relation},
      {"mAPar", &StageMeans::parsimony},
      {"mAMSR", &StageMeans::msr}};
  for (const auto& [name, field] : rows) {
    out << Pad(name, 8);
    for (MainRelation m : kAllMainRelations) {
      const auto it = r.by_main_relation.find(m);
      out << Pad(it == r.by_main_relation.end() ? "-" : FormatNumber(it->second.*field),
                 24);
    }
    out << "\n";
  }
  out << "\n";

  out << "By sub-relation\n" << MeansHeader("relation");
  for (SubRelation s : kAllSubRelations) {
    const auto it = r.by_sub_relation.find(s);
    if (it == r.by_sub_relation.end()) {
      out << Pad(SubRelationName(s), 18) << Pad("0", 6) << "-\n";
      continue;
    }
    out << MeansRow(SubRelationName(s), it->second);
  }
  out << "\n";

  out << "Per threshold\n"
      << Pad("s", 8) << Pad("APre", 24) << Pad("ARel", 24) << Pad("APar", 24)
      << "AMSR\n";
  for (const auto& t : r.per_threshold) {
    out << Pad(FormatNumber(t.threshold), 8) << Pad(FormatNumber(t.presence), 24)
        << Pad(FormatNumber(t.relation), 24) << Pad(FormatNumber(t.parsimony), 24)
        << FormatNumber(t.amsr) << "\n";
  }

  if (r.general.fad || r.general.fd || r.general.kl) {
    out << "\nGeneral metrics (not scenes excluded)\n";
    if (r.general.fad) out << Pad("FAD", 8) << FormatNumber(*r.general.fad) << "\n";
    if (r.general.fd) out << Pad("FD", 8) << FormatNumber(*r.general.fd) << "\n";
    if (r.general.kl) {
      out << Pad("KL", 8) << FormatNumber(*r.general.kl)
          << (r.general.kl_floored ? "  (q floored at 1e-12 somewhere)" : "") << "\n";
    }
  }
  if (!r.missing_detections.empty()) {
    out << "\nScenes without detections (scored as empty):";
    for (const auto& id : r.missing_detections) out << " " << id;
    out << "\n";
  }
  if (!r.notes.empty()) {
    out << "\nNotes\n";
    for (const auto& n : r.notes) out << "- " << n << "\n";
  }
  return out.str();
}

std::string RelationTsv(const EvalReport& r) {
  std::string out = "sub_relation\tmain_relation\tN\tmAPre\tmARel\tmAPar\tmAMSR\n";
  for (const auto& [rel, m] : r.by_sub_relation) {
    out += std::string(SubRelationName(rel)) + "\t" +
           std::string(MainRelationName(CanonicalRelationSpec(rel).main_relation)) +
           "\t" + std::to_string(m.scenes) + "\t" + FormatNumber(m.presence) + "\t" +
           FormatNumber(m.relation) + "\t" + FormatNumber(m.parsimony) + "\t" +
           FormatNumber(m.msr) + "\n";
  }
  return out;
}

void WriteReportFiles(const EvalReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  const std::pair<const char*, std::string> files[] = {
      {"report.json", ReportToJson(report)},
      {"report.txt", RenderTables(report)},
      {"relations.tsv", RelationTsv(report)}};
  for (const auto& [name, text] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << text;
  }
}

}  // namespace audiorel
