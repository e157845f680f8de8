#pragma once

// Sign dictionary construction: per-clip preprocessing (trim, validity-driven
// imputation, spatial normalization, fingerspelling retiming) and the
// gloss-indexed immutable dictionary with its binary container format.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slgen/gloss.hpp"
#include "slgen/pose.hpp"

namespace slgen::posedict {

using pose::Group;
using pose::PoseClip;
using pose::PoseFrame;
using pose::Schema;

// Target body frame: where frame 0's shoulder midpoint lands and how wide the
// shoulders are, in canvas units.
struct BodyFrameSpec {
  double mid_x = 0.5;
  double mid_y = 0.32;
  double shoulder_width = 0.24;
};

struct BuildConfig {
  BodyFrameSpec target;
  double fingerspell_retime_factor = 1.5;
  bool dominant_right = true;
  std::vector<std::string> rest_clip_ids;  // first frames define the neutral pose
  std::optional<PoseFrame> neutral;        // overrides the built-in default
  // clip id -> per-frame keep mask from a QC report; dropped frames are
  // invalidated and re-imputed.
  std::map<std::string, std::vector<bool>> qc_keep;
};

struct SignDictionary {
  std::map<std::string, PoseClip> clips;
  std::map<std::string, std::vector<std::string>> by_gloss;
  PoseFrame neutral_pose;

  const PoseClip& clip(const std::string& id) const {
    auto it = clips.find(id);
    if (it == clips.end()) fail(Errc::DataError, "unknown clip id " + id);
    return it->second;
  }
};

struct IngestIssue {
  std::string clip_id;
  std::string reason;
};

struct IngestReport {
  size_t accepted = 0;
  std::vector<IngestIssue> skipped;
};

// ------------------------------------------------------------------- trim

inline PoseClip trim(PoseClip clip) {
  size_t n = clip.frames.size();
  size_t start = clip.trim_start;
  size_t end = clip.trim_end == 0 && clip.trim_start == 0 ? n : clip.trim_end;
  if (start >= end || end > n) fail(Errc::DataError, "invalid trim bounds on clip " + clip.id);
  if (start == 0 && end == n) {
    clip.trim_start = 0;
    clip.trim_end = n;
    return clip;
  }
  std::vector<PoseFrame> kept(clip.frames.begin() + std::ptrdiff_t(start),
                              clip.frames.begin() + std::ptrdiff_t(end));
  clip.frames = std::move(kept);
  clip.trim_start = 0;
  clip.trim_end = clip.frames.size();
  return clip;
}

// ------------------------------------------------------------------ impute

namespace detail {

inline void copy_group(PoseFrame& dst, const PoseFrame& src, Group g) {
  switch (g) {
    case Group::Body: dst.body = src.body; break;
    case Group::Face: dst.face = src.face; break;
    case Group::LeftHand: dst.left_hand = src.left_hand; break;
    case Group::RightHand: dst.right_hand = src.right_hand; break;
  }
  dst.valid(g) = true;
}

inline void lerp_group(PoseFrame& dst, const PoseFrame& a, const PoseFrame& b, double w, Group g) {
  auto mix = [w](double x, double y) { return x + (y - x) * w; };
  switch (g) {
    case Group::Body:
      for (size_t i = 0; i < dst.body.size(); ++i)
        dst.body[i] = {mix(a.body[i].x, b.body[i].x), mix(a.body[i].y, b.body[i].y)};
      break;
    case Group::Face:
      for (size_t i = 0; i < dst.face.size(); ++i)
        dst.face[i] = {mix(a.face[i].x, b.face[i].x), mix(a.face[i].y, b.face[i].y)};
      break;
    case Group::LeftHand:
      for (size_t i = 0; i < dst.left_hand.size(); ++i)
        dst.left_hand[i] = {mix(a.left_hand[i].x, b.left_hand[i].x), mix(a.left_hand[i].y, b.left_hand[i].y),
                            mix(a.left_hand[i].z, b.left_hand[i].z)};
      break;
    case Group::RightHand:
      for (size_t i = 0; i < dst.right_hand.size(); ++i)
        dst.right_hand[i] = {mix(a.right_hand[i].x, b.right_hand[i].x),
                             mix(a.right_hand[i].y, b.right_hand[i].y),
                             mix(a.right_hand[i].z, b.right_hand[i].z)};
      break;
  }
  dst.valid(g) = true;
}

}  // namespace detail

// Leading/trailing invalid runs take the neutral pose; interior runs are
// linearly interpolated between nearest valid neighbours. Fingerspelling
// clips additionally hold the non-dominant hand at neutral throughout.
inline PoseClip impute(PoseClip clip, const std::optional<PoseFrame>& neutral, bool is_fingerspelling,
                       bool dominant_right = true) {
  if (clip.frames.empty()) return clip;
  const size_t n = clip.frames.size();
  for (Group g : pose::kAllGroups) {
    std::vector<size_t> valid_at;
    for (size_t t = 0; t < n; ++t)
      if (clip.frames[t].valid(g)) valid_at.push_back(t);
    if (valid_at.empty()) {
      if (!neutral) fail(Errc::NoValidData, std::string(pose::group_name(g)) + " invalid for all of clip " + clip.id);
      for (size_t t = 0; t < n; ++t) detail::copy_group(clip.frames[t], *neutral, g);
      continue;
    }
    // leading run
    for (size_t t = 0; t < valid_at.front(); ++t) {
      if (neutral) detail::copy_group(clip.frames[t], *neutral, g);
      else detail::copy_group(clip.frames[t], clip.frames[valid_at.front()], g);
    }
    // trailing run
    for (size_t t = valid_at.back() + 1; t < n; ++t) {
      if (neutral) detail::copy_group(clip.frames[t], *neutral, g);
      else detail::copy_group(clip.frames[t], clip.frames[valid_at.back()], g);
    }
    // interior runs
    for (size_t k = 0; k + 1 < valid_at.size(); ++k) {
      size_t a = valid_at[k], b = valid_at[k + 1];
      for (size_t t = a + 1; t < b; ++t) {
        double w = double(t - a) / double(b - a);
        detail::lerp_group(clip.frames[t], clip.frames[a], clip.frames[b], w, g);
      }
    }
  }
  if (is_fingerspelling && neutral) {
    Group nd = dominant_right ? Group::LeftHand : Group::RightHand;
    for (auto& f : clip.frames) detail::copy_group(f, *neutral, nd);
  }
  return clip;
}

// --------------------------------------------------------------- normalize

// One similarity transform (translation + isotropic scale, no rotation) from
// frame 0's shoulder line onto the target spec, applied to every frame; the
// remaining frames get one shared translation so that their average shoulder
// midpoint stays anchored to frame 0's.
inline PoseClip normalize_clip(PoseClip clip, const BodyFrameSpec& target) {
  if (clip.frames.empty()) return clip;
  const PoseFrame& f0 = clip.frames.front();
  if (!f0.body_valid) fail(Errc::DataError, "frame 0 body landmarks invalid in clip " + clip.id);
  auto ls = f0.body[pose::body_idx::kLeftShoulder];
  auto rs = f0.body[pose::body_idx::kRightShoulder];
  double width = std::hypot(ls.x - rs.x, ls.y - rs.y);
  if (width < 1e-9) fail(Errc::DegenerateScale, "zero shoulder width in clip " + clip.id);
  double scale = target.shoulder_width / width;
  double mid_x = 0.5 * (ls.x + rs.x), mid_y = 0.5 * (ls.y + rs.y);
  double tx = target.mid_x - mid_x * scale;
  double ty = target.mid_y - mid_y * scale;
  for (auto& f : clip.frames) {
    for (auto& p : f.body) { p.x = p.x * scale + tx; p.y = p.y * scale + ty; }
    for (auto& p : f.face) { p.x = p.x * scale + tx; p.y = p.y * scale + ty; }
    for (auto& p : f.left_hand) { p.x = p.x * scale + tx; p.y = p.y * scale + ty; p.z *= scale; }
    for (auto& p : f.right_hand) { p.x = p.x * scale + tx; p.y = p.y * scale + ty; p.z *= scale; }
  }
  if (clip.frames.size() > 1) {
    double ax = 0, ay = 0;
    for (size_t t = 1; t < clip.frames.size(); ++t) {
      const auto& f = clip.frames[t];
      ax += 0.5 * (f.body[pose::body_idx::kLeftShoulder].x + f.body[pose::body_idx::kRightShoulder].x);
      ay += 0.5 * (f.body[pose::body_idx::kLeftShoulder].y + f.body[pose::body_idx::kRightShoulder].y);
    }
    ax /= double(clip.frames.size() - 1);
    ay /= double(clip.frames.size() - 1);
    double dx = target.mid_x - ax, dy = target.mid_y - ay;
    for (size_t t = 1; t < clip.frames.size(); ++t) {
      auto& f = clip.frames[t];
      for (auto& p : f.body) { p.x += dx; p.y += dy; }
      for (auto& p : f.face) { p.x += dx; p.y += dy; }
      for (auto& p : f.left_hand) { p.x += dx; p.y += dy; }
      for (auto& p : f.right_hand) { p.x += dx; p.y += dy; }
    }
  }
  return clip;
}

// ------------------------------------------------------------------ retime

// Shortens (factor > 1) or stretches (factor < 1) a clip by resampling with
// linear interpolation at the original fps. Endpoints are reproduced exactly.
inline PoseClip retime(PoseClip clip, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) fail(Errc::ConfigError, "retime factor must be finite and > 0");
  size_t n = clip.frames.size();
  if (n < 2 || factor == 1.0) return clip;
  size_t n_out = size_t(std::llround(double(n - 1) / factor)) + 1;
  if (n_out < 2) n_out = 2;
  std::vector<PoseFrame> out;
  out.reserve(n_out);
  for (size_t k = 0; k < n_out; ++k) {
    double t = double(k) * double(n - 1) / double(n_out - 1);
    size_t lo = size_t(t);
    if (lo >= n - 1) {
      out.push_back(clip.frames.back());
      continue;
    }
    double frac = t - double(lo);
    if (frac == 0.0) out.push_back(clip.frames[lo]);
    else out.push_back(pose::lerp(clip.frames[lo], clip.frames[lo + 1], frac));
  }
  clip.frames = std::move(out);
  clip.trim_start = 0;
  clip.trim_end = clip.frames.size();
  return clip;
}

// ------------------------------------------------------------------- build

namespace detail {

inline bool is_fingerspelling_gloss(const std::string& normalized) {
  auto g = gloss::parse_gloss(normalized);
  return g.tokens.size() == 1 && g.tokens[0].kind == gloss::TokenKind::Fingerspelled;
}

inline PoseFrame median_first_frames(const std::vector<const PoseClip*>& rests) {
  PoseFrame out = rests.front()->frames.front();
  size_t n = rests.size();
  std::vector<double> vals(n);
  auto median_of = [&](auto getter) {
    for (size_t i = 0; i < n; ++i) vals[i] = getter(rests[i]->frames.front());
    std::sort(vals.begin(), vals.end());
    return n % 2 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
  };
  for (size_t i = 0; i < out.body.size(); ++i) {
    out.body[i].x = median_of([i](const PoseFrame& f) { return f.body[i].x; });
    out.body[i].y = median_of([i](const PoseFrame& f) { return f.body[i].y; });
  }
  for (size_t i = 0; i < out.face.size(); ++i) {
    out.face[i].x = median_of([i](const PoseFrame& f) { return f.face[i].x; });
    out.face[i].y = median_of([i](const PoseFrame& f) { return f.face[i].y; });
  }
  for (size_t i = 0; i < out.left_hand.size(); ++i) {
    out.left_hand[i].x = median_of([i](const PoseFrame& f) { return f.left_hand[i].x; });
    out.left_hand[i].y = median_of([i](const PoseFrame& f) { return f.left_hand[i].y; });
    out.left_hand[i].z = median_of([i](const PoseFrame& f) { return f.left_hand[i].z; });
  }
  for (size_t i = 0; i < out.right_hand.size(); ++i) {
    out.right_hand[i].x = median_of([i](const PoseFrame& f) { return f.right_hand[i].x; });
    out.right_hand[i].y = median_of([i](const PoseFrame& f) { return f.right_hand[i].y; });
    out.right_hand[i].z = median_of([i](const PoseFrame& f) { return f.right_hand[i].z; });
  }
  out.body_valid = out.face_valid = out.left_hand_valid = out.right_hand_valid = true;
  return out;
}

}  // namespace detail

// Per clip: trim -> (QC drops) -> impute -> normalize -> retime (fingerspelling
// only). Clips with unparseable or classifier glosses are skipped and
// reported, never fatal.
inline std::pair<SignDictionary, IngestReport> build_dictionary(const std::vector<PoseClip>& raw_clips,
                                                                const BuildConfig& cfg = {}) {
  SignDictionary dict;
  IngestReport report;

  // Neutral pose: explicit override, else median of rest clips, else default.
  if (cfg.neutral) {
    dict.neutral_pose = *cfg.neutral;
  } else if (!cfg.rest_clip_ids.empty()) {
    std::vector<const PoseClip*> rests;
    for (const auto& c : raw_clips)
      for (const auto& id : cfg.rest_clip_ids)
        if (c.id == id && !c.frames.empty()) rests.push_back(&c);
    if (rests.empty()) fail(Errc::ConfigError, "no rest clips found for neutral pose");
    dict.neutral_pose = detail::median_first_frames(rests);
  } else {
    Schema s = raw_clips.empty() ? Schema{} : raw_clips.front().schema();
    dict.neutral_pose = pose::make_neutral_pose(s);
  }
  // Neutral lives in normalized space alongside the clips.
  {
    PoseClip nc;
    nc.id = "<neutral>";
    nc.frames = {dict.neutral_pose};
    nc = normalize_clip(std::move(nc), cfg.target);
    dict.neutral_pose = nc.frames.front();
  }

  for (const auto& raw : raw_clips) {
    try {
      std::string norm_gloss;
      try {
        norm_gloss = gloss::normalize_gloss(raw.gloss);
      } catch (const Error& e) {
        report.skipped.push_back({raw.id, std::string("gloss parse failed: ") + e.what()});
        continue;
      }
      if (gloss::is_classifier_gloss(norm_gloss)) {
        report.skipped.push_back({raw.id, "classifier gloss excluded: " + norm_gloss});
        continue;
      }
      if (raw.frames.empty()) {
        report.skipped.push_back({raw.id, "clip has no frames"});
        continue;
      }
      PoseClip c = trim(raw);
      auto qc = cfg.qc_keep.find(raw.id);
      if (qc != cfg.qc_keep.end()) {
        for (size_t t = 0; t < c.frames.size() && t < qc->second.size(); ++t) {
          if (!qc->second[t]) {
            for (Group g : pose::kAllGroups) c.frames[t].valid(g) = false;
          }
        }
      }
      bool is_fs = detail::is_fingerspelling_gloss(norm_gloss);
      c = impute(std::move(c), dict.neutral_pose, is_fs, cfg.dominant_right);
      c = normalize_clip(std::move(c), cfg.target);
      if (is_fs && cfg.fingerspell_retime_factor != 1.0)
        c = retime(std::move(c), cfg.fingerspell_retime_factor);
      c.gloss = norm_gloss;
      dict.by_gloss[norm_gloss].push_back(c.id);
      dict.clips[c.id] = std::move(c);
      ++report.accepted;
    } catch (const Error& e) {
      report.skipped.push_back({raw.id, e.what()});
    }
  }
  return {std::move(dict), std::move(report)};
}

// Fill the lexicon's gloss->clips index from a built dictionary.
inline void link_lexicon(gloss::Lexicon& lex, const SignDictionary& dict) {
  lex.gloss_to_clips.clear();
  for (const auto& [g, ids] : dict.by_gloss) lex.gloss_to_clips[g] = ids;
}

// --------------------------------------------------------------------- IO

namespace io {

using nlohmann::json;

inline void save_dictionary(const std::string& path, const SignDictionary& dict) {
  std::ofstream os(path, std::ios::binary);
  if (!os.good()) fail(Errc::IoError, "cannot write dictionary " + path);
  os.write(pose::io::kDictMagic, 8);
  json header;
  Schema s = pose::schema_of(dict.neutral_pose);
  header["schema"] = {{"body", s.body}, {"face", s.face}, {"hand", s.hand}};
  json clips = json::array();
  for (const auto& [id, c] : dict.clips)
    clips.push_back({{"id", id}, {"gloss", c.gloss}, {"signer", c.signer}, {"fps", c.fps},
                     {"frames", c.frames.size()}});
  header["clips"] = std::move(clips);
  std::string h = header.dump();
  pose::io::write_u64(os, h.size());
  os.write(h.data(), std::streamsize(h.size()));
  pose::io::write_frame_binary(os, dict.neutral_pose);
  for (const auto& [id, c] : dict.clips)
    for (const auto& f : c.frames) pose::io::write_frame_binary(os, f);
}

inline SignDictionary load_dictionary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) fail(Errc::IoError, "cannot open dictionary " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, pose::io::kDictMagic, 8) != 0) fail(Errc::DataError, "bad dictionary magic");
  uint64_t hlen = pose::io::read_u64(is);
  std::string h(hlen, '\0');
  is.read(h.data(), std::streamsize(hlen));
  json header = json::parse(h);
  Schema s{header.at("schema").at("body").get<int>(), header.at("schema").at("face").get<int>(),
           header.at("schema").at("hand").get<int>()};
  SignDictionary dict;
  dict.neutral_pose = pose::io::read_frame_binary(is, s);
  for (const auto& meta : header.at("clips")) {
    PoseClip c;
    c.id = meta.at("id").get<std::string>();
    c.gloss = meta.at("gloss").get<std::string>();
    c.signer = meta.value("signer", "");
    c.fps = meta.at("fps").get<double>();
    size_t n = meta.at("frames").get<size_t>();
    c.frames.reserve(n);
    for (size_t k = 0; k < n; ++k) c.frames.push_back(pose::io::read_frame_binary(is, s));
    c.trim_end = c.frames.size();
    dict.by_gloss[c.gloss].push_back(c.id);
    dict.clips[c.id] = std::move(c);
  }
  return dict;
}

}  // namespace io

}  // namespace slgen::posedict
