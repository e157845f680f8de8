#pragma once

// Motion matching over the sign dictionary: economy-of-motion variant
// selection (weighted squared endpoint distance), crossfade blending into one
// continuous sequence with neutral bookends, and eyebrow expression blending
// driven by the linguistic flags.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slgen/gloss.hpp"
#include "slgen/metrics.hpp"
#include "slgen/posedict.hpp"

namespace slgen::motion {

using metrics::LinguisticFlags;
using pose::PoseClip;
using pose::PoseFrame;
using pose::PoseSequence;
using posedict::SignDictionary;

struct MatchWeights {
  double body = 1.0;
  double face = 0.25;
  double hands = 0.5;
};

// Weighted sum over body parts of the squared Euclidean distance between the
// previous clip's final frame and the next clip's first frame.
inline double transition_cost(const PoseFrame& prev_end, const PoseFrame& next_start,
                              const MatchWeights& w) {
  if (pose::schema_of(prev_end) != pose::schema_of(next_start))
    fail(Errc::SchemaMismatch, "transition cost on mismatched schemas");
  if (w.body == 0 && w.face == 0 && w.hands == 0)
    fail(Errc::ConfigError, "match weights must not all be zero");
  double body = 0, face = 0, hands = 0;
  for (size_t i = 0; i < prev_end.body.size(); ++i) {
    double dx = prev_end.body[i].x - next_start.body[i].x;
    double dy = prev_end.body[i].y - next_start.body[i].y;
    body += dx * dx + dy * dy;
  }
  for (size_t i = 0; i < prev_end.face.size(); ++i) {
    double dx = prev_end.face[i].x - next_start.face[i].x;
    double dy = prev_end.face[i].y - next_start.face[i].y;
    face += dx * dx + dy * dy;
  }
  auto hand_term = [&](const std::vector<pose::Vec3>& a, const std::vector<pose::Vec3>& b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      double dx = a[i].x - b[i].x, dy = a[i].y - b[i].y, dz = a[i].z - b[i].z;
      acc += dx * dx + dy * dy + dz * dz;
    }
    return acc;
  };
  hands += hand_term(prev_end.left_hand, next_start.left_hand);
  hands += hand_term(prev_end.right_hand, next_start.right_hand);
  return w.body * body + w.face * face + w.hands * hands;
}

inline double transition_cost(const PoseClip& prev, const PoseClip& next, const MatchWeights& w) {
  if (prev.frames.empty() || next.frames.empty())
    fail(Errc::SchemaMismatch, "transition cost on empty clip");
  return transition_cost(prev.frames.back(), next.frames.front(), w);
}

// A realization unit is one dictionary lookup: lexical tokens map 1:1, while
// fingerspelled tokens expand into per-letter units plus an optional QMwg.
struct RealizationUnit {
  std::string gloss;
  int token_index = 0;
  bool fingerspelling = false;
};

inline std::vector<RealizationUnit> expand_units(const gloss::GlossSentence& sentence) {
  std::vector<RealizationUnit> units;
  for (size_t ti = 0; ti < sentence.tokens.size(); ++ti) {
    const auto& tok = sentence.tokens[ti];
    if (tok.kind == gloss::TokenKind::Fingerspelled) {
      for (const auto& letter : tok.letters)
        units.push_back({"fs-" + letter, int(ti), true});
      if (tok.question_wiggle) units.push_back({"QMwg", int(ti), false});
    } else {
      units.push_back({gloss::render(gloss::canonicalize(tok)), int(ti), false});
    }
  }
  return units;
}

struct SynthesisPlan {
  std::vector<RealizationUnit> units;
  std::vector<std::string> chosen;  // clip id per unit
  std::vector<double> costs;        // entry 0 is the distance from neutral
  size_t blend_window = 20;
  double fps = 90.0;
  std::vector<std::string> source_glosses;  // original token surfaces
};

// Greedy per-step argmin of the transition cost: the first unit is matched
// against a one-frame neutral pseudo-clip, each later unit against the clip
// chosen for its predecessor. Ties break toward the smallest clip id.
inline SynthesisPlan select_variants(const SignDictionary& dict, const gloss::GlossSentence& sentence,
                                     const MatchWeights& w, size_t blend_window = 20,
                                     double fps = 90.0) {
  SynthesisPlan plan;
  plan.units = expand_units(sentence);
  plan.blend_window = blend_window;
  plan.fps = fps;
  for (const auto& t : sentence.tokens) plan.source_glosses.push_back(gloss::render(t));
  if (plan.units.empty()) fail(Errc::MissingGloss, "empty gloss sequence");

  const PoseFrame* prev_end = &dict.neutral_pose;
  for (const auto& unit : plan.units) {
    auto it = dict.by_gloss.find(unit.gloss);
    if (it == dict.by_gloss.end() || it->second.empty())
      fail(Errc::MissingGloss, "no clips for gloss '" + unit.gloss + "'");
    std::vector<std::string> candidates = it->second;
    std::sort(candidates.begin(), candidates.end());
    double best_cost = std::numeric_limits<double>::infinity();
    const std::string* best_id = nullptr;
    for (const auto& id : candidates) {
      const PoseClip& cand = dict.clip(id);
      double c = transition_cost(*prev_end, cand.frames.front(), w);
      if (c < best_cost) {
        best_cost = c;
        best_id = &id;
      }
    }
    plan.chosen.push_back(*best_id);
    plan.costs.push_back(best_cost);
    prev_end = &dict.clip(*best_id).frames.back();
  }
  return plan;
}

namespace detail {

inline PoseClip resample_to_fps(const PoseClip& clip, double out_fps) {
  if (clip.fps == out_fps) return clip;
  PoseClip c = posedict::retime(clip, clip.fps / out_fps);
  c.fps = out_fps;
  return c;
}

}  // namespace detail

// Linear crossfade concatenation: clips resampled to the output rate,
// consecutive segments overlapped over the blend window with weight
// w = k/(K-1), and half-second neutral holds prepended and appended.
inline PoseSequence blend(const SynthesisPlan& plan, const SignDictionary& dict) {
  PoseSequence seq;
  seq.fps = plan.fps;
  seq.glosses = plan.source_glosses;

  struct Segment {
    std::vector<PoseFrame> frames;
    pose::FrameMarker marker;
  };
  std::vector<Segment> segments;

  size_t bookend = size_t(std::llround(0.5 * plan.fps));
  if (bookend < 1) bookend = 1;
  Segment head;
  head.frames.assign(bookend, dict.neutral_pose);
  head.marker = {pose::MarkerKind::Neutral, -1, ""};
  segments.push_back(std::move(head));

  for (size_t k = 0; k < plan.chosen.size(); ++k) {
    Segment s;
    PoseClip c = detail::resample_to_fps(dict.clip(plan.chosen[k]), plan.fps);
    s.frames = std::move(c.frames);
    s.marker = {pose::MarkerKind::Gloss, plan.units[k].token_index, plan.units[k].gloss};
    segments.push_back(std::move(s));
  }

  Segment tail;
  tail.frames.assign(bookend, dict.neutral_pose);
  tail.marker = {pose::MarkerKind::Neutral, -1, ""};
  segments.push_back(std::move(tail));

  // Window clamped to half the shortest segment so overlaps never collide.
  size_t window = plan.blend_window;
  for (const auto& s : segments) window = std::min(window, s.frames.size() / 2);
  if (window < 1) window = 1;

  std::vector<PoseFrame> out;
  std::vector<pose::FrameMarker> markers;
  for (size_t si = 0; si < segments.size(); ++si) {
    auto& s = segments[si];
    if (si == 0) {
      out = std::move(s.frames);
      markers.assign(out.size(), s.marker);
      continue;
    }
    size_t K = std::min({window, out.size(), s.frames.size()});
    for (size_t k = 0; k < K; ++k) {
      double w = K == 1 ? 0.5 : double(k) / double(K - 1);
      size_t oi = out.size() - K + k;
      out[oi] = pose::lerp(out[oi], s.frames[k], w);
      markers[oi] = {pose::MarkerKind::Blend, s.marker.token_index, s.marker.unit};
    }
    for (size_t k = K; k < s.frames.size(); ++k) {
      out.push_back(std::move(s.frames[k]));
      markers.push_back(s.marker);
    }
  }
  seq.frames = std::move(out);
  seq.markers = std::move(markers);
  return seq;
}

// ---------------------------------------------------------- expressions

struct ExpressionProfile {
  std::vector<int> brow_indices;
  double raise_delta = 0.02;   // canvas units, applied upward (negative y)
  double furrow_delta = 0.012; // applied downward
  // Ramp length in frames; <0 means "use the half-second bookend".
  int ramp_frames = -1;
};

// Standard brow arcs of the 468-point face layout.
inline ExpressionProfile default_expression_profile() {
  ExpressionProfile p;
  p.brow_indices = {70, 63, 105, 66, 107, 46, 53, 52, 65, 55,
                    300, 293, 334, 296, 336, 276, 283, 282, 295, 285};
  return p;
}

// Raised brows for yes/no questions, furrowed for wh-questions; displacement
// ramps in and out over the bookend windows. Only brow landmarks change.
inline PoseSequence blend_expressions(PoseSequence seq, const LinguisticFlags& flags,
                                      const ExpressionProfile& profile) {
  double dy = 0.0;
  if (flags.ynq) dy = -profile.raise_delta;       // ynq wins over whq
  else if (flags.whq) dy = profile.furrow_delta;
  seq.flags = {flags.ynq, flags.whq, flags.conditional, flags.negation};
  if (dy == 0.0 || seq.frames.empty()) return seq;

  size_t n = seq.frames.size();
  size_t ramp = profile.ramp_frames >= 0 ? size_t(profile.ramp_frames)
                                         : size_t(std::llround(0.5 * seq.fps));
  if (ramp < 1) ramp = 1;
  for (size_t t = 0; t < n; ++t) {
    size_t edge = std::min(t, n - 1 - t);
    double w = std::min(1.0, double(edge) / double(ramp));
    if (w == 0.0) continue;
    for (int idx : profile.brow_indices) {
      if (idx >= 0 && size_t(idx) < seq.frames[t].face.size())
        seq.frames[t].face[idx].y += dy * w;
    }
  }
  return seq;
}

}  // namespace slgen::motion
