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

#include "audiorel/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "audiorel/errors.h"
#include "audiorel/grid.h"
#include "json.hpp"

namespace audiorel {
namespace {

using nlohmann::json;

constexpr float kNormalizedPeak = 0.9f;

int64_t SecondsToSamples(double s) {
  return static_cast<int64_t>(std::llround(s * kSampleRate));
}

enum class Separation {
  kGap,           // prev_end + gap
  kGridBoundary,  // also start no earlier than the grid boundary after prev_end
  kEmptyCell,     // also leave one whole empty grid cell between events
};

struct Plan {
  std::vector<EventPlacement> placements;
  std::vector<std::vector<EventPlacement>> references;
  std::optional<int> branch;
};

EventPlacement PickClip(const SeedLibrary& library, int class_id,
                        int64_t cap_samples, Rng& rng) {
  const auto clips = library.ClipsFor(class_id);
  const SeedClip& clip = clips[UniformInt(rng, 0, clips.size() - 1)];
  EventPlacement p;
  p.class_id = class_id;
  p.clip = clip.ref;
  p.num_samples =
      std::min<int64_t>(static_cast<int64_t>(clip.samples.size()), cap_samples);
  return p;
}

// Lays `events` out left to right with drawn gaps. Fails only when the
// worst-case length exceeds the scene, which the duration caps rule out.
std::optional<std::vector<EventPlacement>> LayOutSequence(
    std::vector<EventPlacement> events, Separation separation,
    const SynthParams& params, Rng& rng) {
  const int64_t gap_lo = SecondsToSamples(params.gap_min_s);
  const int64_t gap_hi = SecondsToSamples(params.gap_max_s);
  int64_t push_bound = 0;
  if (separation == Separation::kGridBoundary) push_bound = kGridSamples;
  if (separation == Separation::kEmptyCell) push_bound = 2 * kGridSamples;

  std::vector<int64_t> gaps(events.size(), 0);
  int64_t worst = 0;
  for (size_t i = 0; i < events.size(); ++i) {
    worst += events[i].num_samples;
    if (i > 0) {
      gaps[i] = UniformInt(rng, gap_lo, gap_hi);
      worst += std::max(gaps[i], push_bound);
    }
  }
  if (worst > kSceneSamples) return std::nullopt;
  int64_t start = UniformInt(rng, 0, kSceneSamples - worst);
  for (size_t i = 0; i < events.size(); ++i) {
    if (i > 0) {
      const int64_t prev_end = events[i - 1].end_sample();
      start = prev_end + gaps[i];
      if (separation == Separation::kGridBoundary) {
        start = std::max(start, CeilToGridSamples(prev_end));
      } else if (separation == Separation::kEmptyCell) {
        start = std::max(start, CeilToGridSamples(prev_end) + kGridSamples);
      }
    }
    events[i].start_sample = start;
  }
  return events;
}

EventPlacement PlaceAlone(EventPlacement event, Rng& rng) {
  event.start_sample = UniformInt(rng, 0, kSceneSamples - event.num_samples);
  return event;
}

// Count: the minimum gap between neighbours plus a random share of the slack.
std::optional<std::vector<EventPlacement>> LayOutCount(
    std::vector<EventPlacement> events, const SynthParams& params, Rng& rng) {
  const int64_t gap_lo = SecondsToSamples(params.gap_min_s);
  const int64_t n = static_cast<int64_t>(events.size());
  int64_t used = gap_lo * (n - 1);
  for (const auto& e : events) used += e.num_samples;
  if (used > kSceneSamples) return std::nullopt;
  const int64_t slack = kSceneSamples - used;
  std::vector<double> weights(n + 1);
  double total = 0.0;
  for (auto& w : weights) {
    w = UniformUnit(rng);
    total += w;
  }
  int64_t start = static_cast<int64_t>(std::floor(slack * weights[0] / total));
  for (int64_t i = 0; i < n; ++i) {
    if (i > 0) {
      start = events[i - 1].end_sample() + gap_lo +
              static_cast<int64_t>(std::floor(slack * weights[i] / total));
    }
    events[i].start_sample = start;
  }
  if (events.back().end_sample() > kSceneSamples) return std::nullopt;
  return events;
}

// Overlap of the two spans after outward snapping to the detection grid must
// still meet the fraction, so detected spans keep the relation.
bool SimultaneityHoldsOnGrid(const EventPlacement& a, const EventPlacement& b,
                             double fraction) {
  auto snap = [](const EventPlacement& p) {
    return std::pair(FloorToGridSamples(p.start_sample),
                     CeilToGridSamples(p.end_sample()));
  };
  const auto [a1, a2] = snap(a);
  const auto [b1, b2] = snap(b);
  const int64_t overlap = std::min(a2, b2) - std::max(a1, b1);
  const int64_t shorter = std::min(a2 - a1, b2 - b1);
  return overlap >= fraction * shorter;
}

std::optional<Plan> TryPlan(SubRelation relation, std::span<const int> events,
                            const SeedLibrary& library,
                            const SynthParams& params, Rng& rng) {
  const int n = static_cast<int>(events.size());
  // Gaps too wide to leave one second per clip cannot be laid out at all.
  if (n > 1 && DurationCapSamples(n, params.gap_min_s) < kMinSliceSamples) {
    return std::nullopt;
  }
  const int64_t cap2 = DurationCapSamples(2, params.gap_min_s);
  Plan plan;
  switch (relation) {
    case SubRelation::kBefore:
    case SubRelation::kAfter: {
      EventPlacement a = PickClip(library, events[0], cap2, rng);
      EventPlacement b = PickClip(library, events[1], cap2, rng);
      // after(A, B): B sounds first.
      std::vector<EventPlacement> order = relation == SubRelation::kBefore
                                              ? std::vector{a, b}
                                              : std::vector{b, a};
      auto laid = LayOutSequence(order, Separation::kGridBoundary, params, rng);
      if (!laid) return std::nullopt;
      plan.placements = *laid;
      break;
    }
    case SubRelation::kSimultaneity: {
      EventPlacement a = PickClip(library, events[0], kMaxSliceSamples, rng);
      EventPlacement b = PickClip(library, events[1], kMaxSliceSamples, rng);
      const int64_t shorter = std::min(a.num_samples, b.num_samples);
      const auto need =
          static_cast<int64_t>(std::ceil(params.overlap_fraction * shorter));
      // Offset of b relative to a such that both min(a_len - d, b_len + d)
      // stay above the required overlap.
      const int64_t delta = UniformInt(rng, need - b.num_samples,
                                       a.num_samples - need);
      const int64_t lo = std::min<int64_t>(0, delta);
      const int64_t hi = std::max(a.num_samples, delta + b.num_samples);
      if (hi - lo > kSceneSamples) return std::nullopt;
      const int64_t origin = UniformInt(rng, 0, kSceneSamples - (hi - lo)) - lo;
      a.start_sample = origin;
      b.start_sample = origin + delta;
      if (!SimultaneityHoldsOnGrid(a, b, params.overlap_fraction)) {
        return std::nullopt;
      }
      plan.placements = {a, b};
      break;
    }
    case SubRelation::kCloseFirst:
    case SubRelation::kFarFirst:
    case SubRelation::kEqualDist: {
      // The same clip twice, so L2 loudness compares like with like.
      EventPlacement first = PickClip(library, events[0], cap2, rng);
      EventPlacement second = first;
      const double far = UniformReal(rng, params.far_gain_min, params.far_gain_max);
      if (relation == SubRelation::kCloseFirst) {
        first.gain = params.near_gain;
        second.gain = far;
      } else if (relation == SubRelation::kFarFirst) {
        first.gain = far;
        second.gain = params.near_gain;
      } else {
        first.gain = second.gain = params.near_gain;
      }
      auto laid =
          LayOutSequence({first, second}, Separation::kEmptyCell, params, rng);
      if (!laid) return std::nullopt;
      plan.placements = *laid;
      break;
    }
    case SubRelation::kCount: {
      const int64_t cap = DurationCapSamples(n, params.gap_min_s);
      std::vector<EventPlacement> picked;
      for (int c : events) picked.push_back(PickClip(library, c, cap, rng));
      auto laid = LayOutCount(picked, params, rng);
      if (!laid) return std::nullopt;
      plan.placements = *laid;
      break;
    }
    case SubRelation::kAnd: {
      std::vector<EventPlacement> picked = {
          PickClip(library, events[0], cap2, rng),
          PickClip(library, events[1], cap2, rng)};
      Shuffle(picked, rng);
      auto laid = LayOutSequence(picked, Separation::kGap, params, rng);
      if (!laid) return std::nullopt;
      plan.placements = *laid;
      break;
    }
    case SubRelation::kOr: {
      for (int k = 0; k < 2; ++k) {
        plan.references.push_back(
            {PlaceAlone(PickClip(library, events[k], kMaxSliceSamples, rng), rng)});
      }
      plan.branch = static_cast<int>(UniformInt(rng, 0, 1));
      plan.placements = plan.references[*plan.branch];
      break;
    }
    case SubRelation::kNot:
      break;
    case SubRelation::kIfThenElse: {
      auto then_branch = LayOutSequence({PickClip(library, events[0], cap2, rng),
                                         PickClip(library, events[1], cap2, rng)},
                                        Separation::kGridBoundary, params, rng);
      if (!then_branch) return std::nullopt;
      plan.references.push_back(*then_branch);
      plan.references.push_back(
          {PlaceAlone(PickClip(library, events[2], cap2, rng), rng)});
      plan.branch = static_cast<int>(UniformInt(rng, 0, 1));
      plan.placements = plan.references[*plan.branch];
      break;
    }
  }
  return plan;
}

void CheckCategoryConstraint(const Corpus& corpus, const RelationSpec& spec,
                             std::span<const int> events) {
  const std::string name(SubRelationName(spec.sub_relation));
  if (spec.constraint == CategoryConstraint::kInterCategory) {
    std::set<MainCategory> seen;
    for (int c : events) {
      if (!seen.insert(corpus.Class(c).main_category).second) {
        throw ValidationError("relation '" + name +
                              "' needs events from distinct main categories");
      }
    }
  } else if (spec.constraint == CategoryConstraint::kIntraCategory) {
    for (int c : events) {
      if (c != events[0]) {
        throw ValidationError("relation '" + name +
                              "' needs every event from the same sub-category");
      }
    }
  }
}

json PlacementToJson(const EventPlacement& p) {
  return json{{"class_id", p.class_id},
              {"source_id", p.clip.source_id},
              {"slice_index", p.clip.slice_index},
              {"start_sample", p.start_sample},
              {"num_samples", p.num_samples},
              {"start", p.start()},
              {"end", p.end()},
              {"gain", p.gain}};
}

EventPlacement PlacementFromJson(const json& node) {
  EventPlacement p;
  p.class_id = node.at("class_id").get<int>();
  p.clip.source_id = node.at("source_id").get<int>();
  p.clip.slice_index = node.at("slice_index").get<int>();
  p.start_sample = node.at("start_sample").get<int64_t>();
  p.num_samples = node.at("num_samples").get<int64_t>();
  p.gain = node.at("gain").get<double>();
  return p;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void SynthParams::Validate() const {
  if (!(gap_min_s > 0 && gap_min_s <= gap_max_s)) {
    throw ConfigError("synth gaps must satisfy 0 < gap_min <= gap_max");
  }
  if (!(overlap_fraction > 0 && overlap_fraction <= 1)) {
    throw ConfigError("overlap fraction must be in (0, 1]");
  }
  if (!(far_gain_min > 0 && far_gain_min <= far_gain_max &&
        far_gain_max * (1 + sigma1) <= near_gain)) {
    throw ConfigError("far gains must be positive and clear the sigma1 margin");
  }
  if (max_retries < 1) throw ConfigError("max_retries must be >= 1");
}

int64_t DurationCapSamples(int num_events, double gap_min_s) {
  const double seconds =
      std::floor((kSceneSeconds - gap_min_s * (num_events - 1)) / num_events);
  return std::min<int64_t>(SecondsToSamples(seconds), kMaxSliceSamples);
}

std::vector<int> SampleEventClasses(const Corpus& corpus, SubRelation relation,
                                    Rng& rng) {
  const RelationSpec& spec = corpus.Relation(relation);
  const int n = static_cast<int>(UniformInt(rng, spec.min_events, spec.max_events));
  std::vector<int> out;
  if (spec.constraint == CategoryConstraint::kIntraCategory) {
    out.assign(n, static_cast<int>(UniformInt(rng, 0, kNumClasses - 1)));
  } else if (spec.constraint == CategoryConstraint::kInterCategory) {
    std::vector<int> mains = {0, 1, 2, 3, 4};
    Shuffle(mains, rng);
    for (int i = 0; i < n; ++i) {
      std::vector<int> members;
      for (const auto& c : corpus.classes()) {
        if (static_cast<int>(c.main_category) == mains[i]) members.push_back(c.id);
      }
      out.push_back(members[UniformInt(rng, 0, members.size() - 1)]);
    }
  } else {
    std::vector<int> ids(kNumClasses);
    for (int i = 0; i < kNumClasses; ++i) ids[i] = i;
    Shuffle(ids, rng);
    out.assign(ids.begin(), ids.begin() + n);
  }
  return out;
}

SceneManifest PlanScene(const Corpus& corpus, SubRelation relation,
                        std::span<const int> event_classes,
                        const SeedLibrary& library, uint64_t rng_seed,
                        const SynthParams& params) {
  params.Validate();
  const RelationSpec& spec = corpus.Relation(relation);
  if (!spec.AcceptsArity(static_cast<int>(event_classes.size()))) {
    throw ValidationError("relation '" + std::string(SubRelationName(relation)) +
                          "' cannot take " +
                          std::to_string(event_classes.size()) + " events");
  }
  CheckCategoryConstraint(corpus, spec, event_classes);

  Rng rng = MakeRng({rng_seed});
  SceneManifest m;
  m.relation = relation;
  m.event_classes.assign(event_classes.begin(), event_classes.end());
  m.template_index = static_cast<int>(UniformInt(rng, 0, kTemplatesPerRelation - 1));
  m.prompt = RenderPrompt(corpus, relation, event_classes, m.template_index);
  m.rng_seed = rng_seed;
  if (relation == SubRelation::kNot) m.forbidden_class = event_classes[0];

  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    auto plan = TryPlan(relation, event_classes, library, params, rng);
    if (!plan) continue;
    std::sort(plan->placements.begin(), plan->placements.end(),
              [](const auto& a, const auto& b) {
                return a.start_sample < b.start_sample;
              });
    m.placements = std::move(plan->placements);
    m.references = std::move(plan->references);
    m.branch = plan->branch;
    return m;
  }
  throw ValidationError("infeasible placement for relation '" +
                        std::string(SubRelationName(relation)) + "' after " +
                        std::to_string(params.max_retries) +
                        " attempts (duration budget exhausted)");
}

std::vector<float> RenderPlacements(std::span<const EventPlacement> placements,
                                    const SeedLibrary& library) {
  std::vector<float> out(kSceneSamples, 0.0f);
  for (const auto& p : placements) {
    if (p.start_sample < 0 || p.num_samples <= 0 ||
        p.end_sample() > kSceneSamples) {
      throw ValidationError("placement outside [0, 10] s");
    }
    const SeedClip& clip = library.Clip(p.class_id, p.clip);
    if (p.num_samples > static_cast<int64_t>(clip.samples.size())) {
      throw ValidationError("placement longer than its clip");
    }
    const float gain = static_cast<float>(p.gain);
    for (int64_t i = 0; i < p.num_samples; ++i) {
      out[p.start_sample + i] += gain * clip.samples[i];
    }
  }
  float peak = 0.0f;
  for (float v : out) peak = std::max(peak, std::abs(v));
  if (peak > 1.0f) {
    const float scale = kNormalizedPeak / peak;
    for (float& v : out) v *= scale;
  }
  return out;
}

std::vector<float> RenderScene(const SceneManifest& manifest,
                               const SeedLibrary& library) {
  return RenderPlacements(manifest.placements, library);
}

std::vector<std::string> ValidateManifest(const SceneManifest& m,
                                          const Corpus& corpus,
                                          const SynthParams& params) {
  std::vector<std::string> issues;
  auto fail = [&](const std::string& what) {
    issues.push_back(m.scene_id + ": " + what);
  };
  const RelationSpec& spec = corpus.Relation(m.relation);
  const auto& ev = m.event_classes;
  if (!spec.AcceptsArity(static_cast<int>(ev.size()))) {
    fail("arity mismatch");
    return issues;
  }
  try {
    CheckCategoryConstraint(corpus, spec, ev);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
  const double gap_min = params.gap_min_s - 0.5 / kSampleRate;
  auto check_spans = [&](const std::vector<EventPlacement>& ps) {
    for (const auto& p : ps) {
      if (p.start_sample < 0 || p.end_sample() > kSceneSamples ||
          p.num_samples <= 0) {
        fail("placement outside [0, 10] s");
      }
      if (p.gain <= 0) fail("non-positive gain");
    }
  };
  auto disjoint_in_order = [&](const EventPlacement& a, const EventPlacement& b) {
    return b.start() - a.end() >= gap_min;
  };
  auto grid_separated = [&](const EventPlacement& a, const EventPlacement& b,
                            double cells) {
    return FloorToGrid(b.start()) >= CeilToGrid(a.end()) + cells * kGridSeconds - 1e-9;
  };
  const auto& ps = m.placements;
  check_spans(ps);
  for (const auto& ref : m.references) check_spans(ref);
  auto expect_count = [&](size_t n) {
    if (ps.size() != n) {
      fail("expected " + std::to_string(n) + " placements, got " +
           std::to_string(ps.size()));
      return false;
    }
    return true;
  };

  switch (m.relation) {
    case SubRelation::kBefore:
    case SubRelation::kAfter: {
      if (!expect_count(2)) break;
      const bool before = m.relation == SubRelation::kBefore;
      const int first = before ? ev[0] : ev[1];
      const int second = before ? ev[1] : ev[0];
      if (ps[0].class_id != first || ps[1].class_id != second) {
        fail("events are not in the stated temporal order");
      }
      if (!disjoint_in_order(ps[0], ps[1])) fail("gap below minimum");
      if (!grid_separated(ps[0], ps[1], 0)) fail("events share a grid cell");
      break;
    }
    case SubRelation::kSimultaneity: {
      if (!expect_count(2)) break;
      const double overlap = std::min(ps[0].end(), ps[1].end()) -
                             std::max(ps[0].start(), ps[1].start());
      const double shorter = std::min(ps[0].duration(), ps[1].duration());
      if (overlap + 1e-9 < params.overlap_fraction * shorter) {
        fail("overlap below the required fraction of the shorter clip");
      }
      break;
    }
    case SubRelation::kCloseFirst:
    case SubRelation::kFarFirst:
    case SubRelation::kEqualDist: {
      if (!expect_count(2)) break;
      if (ps[0].class_id != ev[0] || ps[1].class_id != ev[0]) {
        fail("spatial events must both be the named class");
      }
      if (!(ps[0].clip == ps[1].clip) || ps[0].num_samples != ps[1].num_samples) {
        fail("spatial events must reuse the same clip");
      }
      if (!disjoint_in_order(ps[0], ps[1])) fail("spatial events overlap");
      if (!grid_separated(ps[0], ps[1], 1)) {
        fail("spatial events need an empty grid cell between them");
      }
      const double g0 = ps[0].gain, g1 = ps[1].gain;
      if (m.relation == SubRelation::kCloseFirst && g0 < (1 + params.sigma1) * g1) {
        fail("closefirst gain ratio below 1 + sigma1");
      }
      if (m.relation == SubRelation::kFarFirst && g1 < (1 + params.sigma1) * g0) {
        fail("farfirst gain ratio below 1 + sigma1");
      }
      if (m.relation == SubRelation::kEqualDist &&
          std::abs(g0 - g1) > params.sigma2 * std::max(g0, g1)) {
        fail("equaldist gains differ by more than sigma2");
      }
      break;
    }
    case SubRelation::kCount: {
      if (!expect_count(ev.size())) break;
      std::multiset<int> placed, named(ev.begin(), ev.end());
      for (const auto& p : ps) placed.insert(p.class_id);
      if (placed != named) fail("placed classes differ from the named classes");
      for (size_t i = 1; i < ps.size(); ++i) {
        if (!disjoint_in_order(ps[i - 1], ps[i])) fail("count events overlap");
      }
      break;
    }
    case SubRelation::kAnd: {
      if (!expect_count(2)) break;
      std::multiset<int> placed = {ps[0].class_id, ps[1].class_id};
      if (placed != std::multiset<int>(ev.begin(), ev.end())) {
        fail("and must place both named events");
      }
      if (!disjoint_in_order(ps[0], ps[1])) fail("and events overlap");
      break;
    }
    case SubRelation::kOr:
    case SubRelation::kIfThenElse: {
      const bool is_or = m.relation == SubRelation::kOr;
      if (m.references.size() != 2 || !m.branch || *m.branch < 0 ||
          *m.branch > 1) {
        fail("needs two reference alternatives and a realized branch");
        break;
      }
      if (ps != m.references[*m.branch]) {
        fail("placements differ from the realized reference");
      }
      const auto& r0 = m.references[0];
      const auto& r1 = m.references[1];
      if (is_or) {
        if (r0.size() != 1 || r1.size() != 1 || r0[0].class_id != ev[0] ||
            r1[0].class_id != ev[1]) {
          fail("or references must hold exactly one named event each");
        }
      } else {
        if (r0.size() != 2 || r1.size() != 1 || r0[0].class_id != ev[0] ||
            r0[1].class_id != ev[1] || r1[0].class_id != ev[2]) {
          fail("ifthenelse references must be (A then B) and (C)");
        } else {
          if (!disjoint_in_order(r0[0], r0[1])) fail("then-branch gap below minimum");
          if (!grid_separated(r0[0], r0[1], 0)) fail("then-branch shares a grid cell");
        }
      }
      break;
    }
    case SubRelation::kNot:
      if (!ps.empty()) fail("not scenes must be silent");
      if (!m.forbidden_class || *m.forbidden_class != ev[0]) {
        fail("forbidden class not recorded");
      }
      break;
  }
  return issues;
}

std::string ManifestToJson(const SceneManifest& m) {
  json j;
  j["scene_id"] = m.scene_id;
  j["relation"] = std::string(SubRelationName(m.relation));
  j["event_classes"] = m.event_classes;
  j["template_index"] = m.template_index;
  j["prompt"] = m.prompt;
  j["placements"] = json::array();
  for (const auto& p : m.placements) j["placements"].push_back(PlacementToJson(p));
  j["branch"] = m.branch ? json(*m.branch) : json(nullptr);
  j["references"] = json::array();
  for (const auto& ref : m.references) {
    json alt = json::array();
    for (const auto& p : ref) alt.push_back(PlacementToJson(p));
    j["references"].push_back(alt);
  }
  j["forbidden_class"] = m.forbidden_class ? json(*m.forbidden_class) : json(nullptr);
  j["audio_path"] = m.audio_path;
  j["reference_paths"] = m.reference_paths;
  j["rng_seed"] = m.rng_seed;
  return j.dump(2) + "\n";
}

SceneManifest ManifestFromJson(std::string_view text) {
  SceneManifest m;
  try {
    const json j = json::parse(text);
    m.scene_id = j.at("scene_id").get<std::string>();
    const auto rel = ParseSubRelation(j.at("relation").get<std::string>());
    if (!rel) throw ValidationError("manifest " + m.scene_id + ": unknown relation");
    m.relation = *rel;
    m.event_classes = j.at("event_classes").get<std::vector<int>>();
    m.template_index = j.at("template_index").get<int>();
    m.prompt = j.at("prompt").get<std::string>();
    for (const auto& p : j.at("placements")) m.placements.push_back(PlacementFromJson(p));
    if (!j.at("branch").is_null()) m.branch = j["branch"].get<int>();
    for (const auto& alt : j.at("references")) {
      std::vector<EventPlacement> ref;
      for (const auto& p : alt) ref.push_back(PlacementFromJson(p));
      m.references.push_back(std::move(ref));
    }
    if (!j.at("forbidden_class").is_null()) {
      m.forbidden_class = j["forbidden_class"].get<int>();
    }
    m.audio_path = j.at("audio_path").get<std::string>();
    m.reference_paths = j.at("reference_paths").get<std::vector<std::string>>();
    m.rng_seed = j.at("rng_seed").get<uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest " + m.scene_id + ": " + e.what());
  }
  return m;
}

void WriteManifest(const SceneManifest& manifest,
                   const std::filesystem::path& path) {
  WriteText(path, ManifestToJson(manifest));
}

SceneManifest ReadManifest(const std::filesystem::path& path) {
  return ManifestFromJson(ReadText(path));
}

std::vector<SceneManifest> GenDataset(const Corpus& corpus,
                                      const SeedLibrary& library,
                                      const DatasetOptions& options,
                                      const std::filesystem::path& out_dir) {
  if (options.pairs_per_relation < 1) {
    throw ConfigError("pairs per relation must be >= 1");
  }
  options.synth.Validate();
  std::error_code ec;
  for (const char* sub : {"audio", "references", "manifests"}) {
    std::filesystem::create_directories(out_dir / sub, ec);
    if (ec) throw IoError("cannot create " + (out_dir / sub).string());
  }

  std::vector<SceneManifest> scenes;
  for (SubRelation relation : kAllSubRelations) {
    for (int i = 0; i < options.pairs_per_relation; ++i) {
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%04d",
                    std::string(SubRelationName(relation)).c_str(), i);
      std::optional<SceneManifest> manifest;
      std::string last_error;
      for (int attempt = 0; attempt < options.synth.max_retries && !manifest;
           ++attempt) {
        Rng draw = MakeRng({options.rng_seed, static_cast<uint64_t>(Index(relation)),
                            static_cast<uint64_t>(i), static_cast<uint64_t>(attempt)});
        const std::vector<int> events = SampleEventClasses(corpus, relation, draw);
        try {
          manifest = PlanScene(corpus, relation, events, library, draw(),
                               options.synth);
        } catch (const ValidationError& e) {
          last_error = e.what();
        }
      }
      if (!manifest) {
        throw ValidationError(std::string("scene ") + id + ": " + last_error);
      }
      manifest->scene_id = id;
      manifest->audio_path = std::string("audio/") + id + ".wav";
      for (size_t k = 0; k < manifest->references.size(); ++k) {
        manifest->reference_paths.push_back(std::string("references/") + id +
                                            "_ref" + std::to_string(k) + ".wav");
      }
      scenes.push_back(std::move(*manifest));
    }
  }

  std::string prompts = "scene_id\tprompt\trelation\n";
  json index;
  index["pairs_per_relation"] = options.pairs_per_relation;
  index["rng_seed"] = options.rng_seed;
  index["slice_seed"] = library.slice_seed();
  index["sample_rate"] = kSampleRate;
  index["scenes"] = json::array();
  for (const auto& m : scenes) {
    WriteWav(out_dir / m.audio_path, RenderScene(m, library));
    for (size_t k = 0; k < m.references.size(); ++k) {
      WriteWav(out_dir / m.reference_paths[k],
               RenderPlacements(m.references[k], library));
    }
    WriteManifest(m, out_dir / "manifests" / (m.scene_id + ".json"));
    prompts += m.scene_id + "\t" + m.prompt + "\t" +
               std::string(SubRelationName(m.relation)) + "\n";
    index["scenes"].push_back(m.scene_id);
  }
  WriteText(out_dir / "prompts.tsv", prompts);
  WriteText(out_dir / "index.json", index.dump(2) + "\n");
  return scenes;
}

std::vector<SceneManifest> LoadDataset(const std::filesystem::path& dir) {
  const auto index_path = dir / "index.json";
  if (!std::filesystem::exists(index_path)) {
    throw ConfigError("no dataset index at " + index_path.string());
  }
  json index;
  try {
    index = json::parse(ReadText(index_path));
  } catch (const json::exception& e) {
    throw ValidationError("malformed dataset index: " + std::string(e.what()));
  }
  std::vector<SceneManifest> scenes;
  for (const auto& id : index.at("scenes")) {
    scenes.push_back(
        ReadManifest(dir / "manifests" / (id.get<std::string>() + ".json")));
  }
  return scenes;
}

}  // namespace audiorel
