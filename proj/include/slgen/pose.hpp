#pragma once

// Skeletal pose data model: per-frame body/face landmarks in 2D, hands in 3D,
// with per-group validity masks; clips, synthesized sequences, and their
// line-delimited text / packed binary encodings.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slgen/common.hpp"

namespace slgen::pose {

struct Schema {
  int body = 33;
  int face = 468;
  int hand = 21;
  bool operator==(const Schema&) const = default;
};

// Landmark indices in the 33-point body layout.
namespace body_idx {
constexpr int kNose = 0;
constexpr int kLeftShoulder = 11;
constexpr int kRightShoulder = 12;
constexpr int kLeftElbow = 13;
constexpr int kRightElbow = 14;
constexpr int kLeftWrist = 15;
constexpr int kRightWrist = 16;
constexpr int kLeftHip = 23;
constexpr int kRightHip = 24;
}  // namespace body_idx

// Landmark indices in the 21-point hand layout.
namespace hand_idx {
constexpr int kWrist = 0;
constexpr int kIndexBase = 5;
constexpr int kPinkyBase = 17;
// Finger polylines, thumb..pinky, each chain rooted at the wrist.
constexpr std::array<std::array<int, 5>, 5> kFingerChains{{
    {0, 1, 2, 3, 4},
    {0, 5, 6, 7, 8},
    {0, 9, 10, 11, 12},
    {0, 13, 14, 15, 16},
    {0, 17, 18, 19, 20},
}};
}  // namespace hand_idx

struct Vec2 {
  double x = 0, y = 0;
  bool operator==(const Vec2&) const = default;
};
struct Vec3 {
  double x = 0, y = 0, z = 0;
  bool operator==(const Vec3&) const = default;
};

enum class Group { Body, Face, LeftHand, RightHand };
constexpr std::array<Group, 4> kAllGroups{Group::Body, Group::Face, Group::LeftHand, Group::RightHand};

inline const char* group_name(Group g) {
  switch (g) {
    case Group::Body: return "body";
    case Group::Face: return "face";
    case Group::LeftHand: return "left_hand";
    case Group::RightHand: return "right_hand";
  }
  return "?";
}

struct PoseFrame {
  std::vector<Vec2> body;
  std::vector<Vec2> face;
  std::vector<Vec3> left_hand;
  std::vector<Vec3> right_hand;
  bool body_valid = true;
  bool face_valid = true;
  bool left_hand_valid = true;
  bool right_hand_valid = true;

  bool operator==(const PoseFrame&) const = default;

  bool& valid(Group g) {
    switch (g) {
      case Group::Body: return body_valid;
      case Group::Face: return face_valid;
      case Group::LeftHand: return left_hand_valid;
      case Group::RightHand: return right_hand_valid;
    }
    return body_valid;
  }
  bool valid(Group g) const { return const_cast<PoseFrame*>(this)->valid(g); }
  bool all_valid() const { return body_valid && face_valid && left_hand_valid && right_hand_valid; }

  static PoseFrame zeros(const Schema& s) {
    PoseFrame f;
    f.body.resize(s.body);
    f.face.resize(s.face);
    f.left_hand.resize(s.hand);
    f.right_hand.resize(s.hand);
    return f;
  }
};

inline Schema schema_of(const PoseFrame& f) {
  return Schema{int(f.body.size()), int(f.face.size()), int(f.left_hand.size())};
}

// Apply fn(group, landmark_index, coord_axis, value_ref) over every coordinate.
template <typename F>
inline void for_each_coord(PoseFrame& frame, F&& fn) {
  for (size_t i = 0; i < frame.body.size(); ++i) {
    fn(Group::Body, i, 0, frame.body[i].x);
    fn(Group::Body, i, 1, frame.body[i].y);
  }
  for (size_t i = 0; i < frame.face.size(); ++i) {
    fn(Group::Face, i, 0, frame.face[i].x);
    fn(Group::Face, i, 1, frame.face[i].y);
  }
  auto hand = [&](Group g, std::vector<Vec3>& h) {
    for (size_t i = 0; i < h.size(); ++i) {
      fn(g, i, 0, h[i].x);
      fn(g, i, 1, h[i].y);
      fn(g, i, 2, h[i].z);
    }
  };
  hand(Group::LeftHand, frame.left_hand);
  hand(Group::RightHand, frame.right_hand);
}

template <typename F>
inline void for_each_coord(const PoseFrame& frame, F&& fn) {
  for_each_coord(const_cast<PoseFrame&>(frame),
                 [&](Group g, size_t i, int axis, double& v) { fn(g, i, axis, double(v)); });
}

// Linear interpolation of every coordinate; validity is AND of the inputs.
inline PoseFrame lerp(const PoseFrame& a, const PoseFrame& b, double w) {
  if (schema_of(a) != schema_of(b)) fail(Errc::SchemaMismatch, "lerp on mismatched schemas");
  PoseFrame out = a;
  auto mix = [w](double x, double y) { return x + (y - x) * w; };
  for (size_t i = 0; i < a.body.size(); ++i)
    out.body[i] = {mix(a.body[i].x, b.body[i].x), mix(a.body[i].y, b.body[i].y)};
  for (size_t i = 0; i < a.face.size(); ++i)
    out.face[i] = {mix(a.face[i].x, b.face[i].x), mix(a.face[i].y, b.face[i].y)};
  for (size_t i = 0; i < a.left_hand.size(); ++i)
    out.left_hand[i] = {mix(a.left_hand[i].x, b.left_hand[i].x), mix(a.left_hand[i].y, b.left_hand[i].y),
                        mix(a.left_hand[i].z, b.left_hand[i].z)};
  for (size_t i = 0; i < a.right_hand.size(); ++i)
    out.right_hand[i] = {mix(a.right_hand[i].x, b.right_hand[i].x), mix(a.right_hand[i].y, b.right_hand[i].y),
                         mix(a.right_hand[i].z, b.right_hand[i].z)};
  out.body_valid = a.body_valid && b.body_valid;
  out.face_valid = a.face_valid && b.face_valid;
  out.left_hand_valid = a.left_hand_valid && b.left_hand_valid;
  out.right_hand_valid = a.right_hand_valid && b.right_hand_valid;
  return out;
}

// Largest Euclidean landmark displacement between two frames (2D for body and
// face, 3D for hands).
inline double max_landmark_displacement(const PoseFrame& a, const PoseFrame& b) {
  double worst = 0;
  auto d2 = [](double dx, double dy, double dz = 0) { return dx * dx + dy * dy + dz * dz; };
  for (size_t i = 0; i < a.body.size(); ++i)
    worst = std::max(worst, d2(a.body[i].x - b.body[i].x, a.body[i].y - b.body[i].y));
  for (size_t i = 0; i < a.face.size(); ++i)
    worst = std::max(worst, d2(a.face[i].x - b.face[i].x, a.face[i].y - b.face[i].y));
  for (size_t i = 0; i < a.left_hand.size(); ++i)
    worst = std::max(worst, d2(a.left_hand[i].x - b.left_hand[i].x, a.left_hand[i].y - b.left_hand[i].y,
                               a.left_hand[i].z - b.left_hand[i].z));
  for (size_t i = 0; i < a.right_hand.size(); ++i)
    worst = std::max(worst, d2(a.right_hand[i].x - b.right_hand[i].x, a.right_hand[i].y - b.right_hand[i].y,
                               a.right_hand[i].z - b.right_hand[i].z));
  return std::sqrt(worst);
}

struct PoseClip {
  std::string id;
  std::string gloss;
  std::string signer;
  double fps = 30.0;
  std::vector<PoseFrame> frames;
  size_t trim_start = 0;
  size_t trim_end = 0;  // exclusive; 0 means "full range" until set

  Schema schema() const {
    if (frames.empty()) return Schema{};
    return schema_of(frames.front());
  }
};

enum class MarkerKind { Neutral, Gloss, Blend };

struct FrameMarker {
  MarkerKind kind = MarkerKind::Neutral;
  int token_index = -1;        // index into the source gloss token list
  std::string unit;            // realization unit gloss (fs-P, KID, ...)
};

struct PoseSequence {
  double fps = 90.0;
  std::vector<PoseFrame> frames;
  std::vector<FrameMarker> markers;  // one per frame
  std::vector<std::string> glosses;  // source gloss tokens
  std::array<bool, 4> flags{false, false, false, false};  // ynq, whq, cond, neg
};

// --------------------------------------------------------------------- IO

namespace io {

using nlohmann::json;

inline json frame_to_json(const PoseFrame& f) {
  json j;
  j["v"] = {int(f.body_valid), int(f.face_valid), int(f.left_hand_valid), int(f.right_hand_valid)};
  auto put2 = [](const std::vector<Vec2>& v) {
    std::vector<double> flat;
    flat.reserve(v.size() * 2);
    for (const auto& p : v) {
      flat.push_back(p.x);
      flat.push_back(p.y);
    }
    return flat;
  };
  auto put3 = [](const std::vector<Vec3>& v) {
    std::vector<double> flat;
    flat.reserve(v.size() * 3);
    for (const auto& p : v) {
      flat.push_back(p.x);
      flat.push_back(p.y);
      flat.push_back(p.z);
    }
    return flat;
  };
  j["body"] = put2(f.body);
  j["face"] = put2(f.face);
  j["lh"] = put3(f.left_hand);
  j["rh"] = put3(f.right_hand);
  return j;
}

inline PoseFrame frame_from_json(const json& j, const Schema& s) {
  PoseFrame f;
  auto v = j.at("v");
  f.body_valid = v.at(0).get<int>() != 0;
  f.face_valid = v.at(1).get<int>() != 0;
  f.left_hand_valid = v.at(2).get<int>() != 0;
  f.right_hand_valid = v.at(3).get<int>() != 0;
  auto get2 = [](const json& arr, int n, const char* what) {
    if (int(arr.size()) != 2 * n) fail(Errc::SchemaMismatch, std::string("bad ") + what + " coordinate count");
    std::vector<Vec2> out(n);
    for (int i = 0; i < n; ++i) out[i] = {arr[2 * i].get<double>(), arr[2 * i + 1].get<double>()};
    return out;
  };
  auto get3 = [](const json& arr, int n, const char* what) {
    if (int(arr.size()) != 3 * n) fail(Errc::SchemaMismatch, std::string("bad ") + what + " coordinate count");
    std::vector<Vec3> out(n);
    for (int i = 0; i < n; ++i)
      out[i] = {arr[3 * i].get<double>(), arr[3 * i + 1].get<double>(), arr[3 * i + 2].get<double>()};
    return out;
  };
  f.body = get2(j.at("body"), s.body, "body");
  f.face = get2(j.at("face"), s.face, "face");
  f.left_hand = get3(j.at("lh"), s.hand, "left hand");
  f.right_hand = get3(j.at("rh"), s.hand, "right hand");
  return f;
}

inline void write_clip_text(std::ostream& os, const PoseClip& c) {
  json header;
  header["type"] = "clip";
  header["id"] = c.id;
  header["gloss"] = c.gloss;
  header["signer"] = c.signer;
  header["fps"] = c.fps;
  Schema s = c.schema();
  header["schema"] = {{"body", s.body}, {"face", s.face}, {"hand", s.hand}};
  header["trim"] = {c.trim_start, c.trim_end};
  header["frames"] = c.frames.size();
  os << header.dump() << "\n";
  for (const auto& f : c.frames) os << frame_to_json(f).dump() << "\n";
}

inline PoseClip read_clip_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(Errc::DataError, "empty clip stream");
  json header = json::parse(line);
  if (header.value("type", "") != "clip") fail(Errc::DataError, "not a clip header");
  PoseClip c;
  c.id = header.at("id").get<std::string>();
  c.gloss = header.at("gloss").get<std::string>();
  c.signer = header.value("signer", "");
  c.fps = header.at("fps").get<double>();
  Schema s{header.at("schema").at("body").get<int>(), header.at("schema").at("face").get<int>(),
           header.at("schema").at("hand").get<int>()};
  c.trim_start = header.at("trim").at(0).get<size_t>();
  c.trim_end = header.at("trim").at(1).get<size_t>();
  size_t n = header.at("frames").get<size_t>();
  for (size_t k = 0; k < n; ++k) {
    if (!std::getline(is, line)) fail(Errc::DataError, "clip truncated at frame " + std::to_string(k));
    c.frames.push_back(frame_from_json(json::parse(line), s));
  }
  return c;
}

// Packed binary twin. All scalars little-endian; coordinates as raw doubles.
constexpr char kClipMagic[8] = {'S', 'L', 'G', 'C', 'L', 'I', 'P', '1'};
constexpr char kSeqMagic[8] = {'S', 'L', 'G', 'P', 'O', 'S', 'Z', '1'};
constexpr char kDictMagic[8] = {'S', 'L', 'G', 'D', 'I', 'C', 'T', '1'};

inline void write_u64(std::ostream& os, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = char((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

inline uint64_t read_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) fail(Errc::DataError, "truncated binary pose file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(buf[i]) << (8 * i);
  return v;
}

inline void write_doubles(std::ostream& os, const double* p, size_t n) {
  for (size_t i = 0; i < n; ++i) write_u64(os, std::bit_cast<uint64_t>(p[i]));
}

inline void read_doubles(std::istream& is, double* p, size_t n) {
  for (size_t i = 0; i < n; ++i) p[i] = std::bit_cast<double>(read_u64(is));
}

inline void write_frame_binary(std::ostream& os, const PoseFrame& f) {
  char v[4] = {char(f.body_valid), char(f.face_valid), char(f.left_hand_valid), char(f.right_hand_valid)};
  os.write(v, 4);
  std::vector<double> flat;
  flat.reserve(f.body.size() * 2 + f.face.size() * 2 + f.left_hand.size() * 3 + f.right_hand.size() * 3);
  for (const auto& p : f.body) { flat.push_back(p.x); flat.push_back(p.y); }
  for (const auto& p : f.face) { flat.push_back(p.x); flat.push_back(p.y); }
  for (const auto& p : f.left_hand) { flat.push_back(p.x); flat.push_back(p.y); flat.push_back(p.z); }
  for (const auto& p : f.right_hand) { flat.push_back(p.x); flat.push_back(p.y); flat.push_back(p.z); }
  write_doubles(os, flat.data(), flat.size());
}

inline PoseFrame read_frame_binary(std::istream& is, const Schema& s) {
  char v[4];
  is.read(v, 4);
  if (!is) fail(Errc::DataError, "truncated binary frame");
  PoseFrame f = PoseFrame::zeros(s);
  f.body_valid = v[0] != 0;
  f.face_valid = v[1] != 0;
  f.left_hand_valid = v[2] != 0;
  f.right_hand_valid = v[3] != 0;
  size_t n = size_t(s.body) * 2 + size_t(s.face) * 2 + size_t(s.hand) * 6;
  std::vector<double> flat(n);
  read_doubles(is, flat.data(), n);
  size_t k = 0;
  for (auto& p : f.body) { p.x = flat[k++]; p.y = flat[k++]; }
  for (auto& p : f.face) { p.x = flat[k++]; p.y = flat[k++]; }
  for (auto& p : f.left_hand) { p.x = flat[k++]; p.y = flat[k++]; p.z = flat[k++]; }
  for (auto& p : f.right_hand) { p.x = flat[k++]; p.y = flat[k++]; p.z = flat[k++]; }
  return f;
}

inline void write_clip_binary(std::ostream& os, const PoseClip& c) {
  os.write(kClipMagic, 8);
  json header;
  header["id"] = c.id;
  header["gloss"] = c.gloss;
  header["signer"] = c.signer;
  header["fps"] = c.fps;
  Schema s = c.schema();
  header["schema"] = {{"body", s.body}, {"face", s.face}, {"hand", s.hand}};
  header["trim"] = {c.trim_start, c.trim_end};
  header["frames"] = c.frames.size();
  std::string h = header.dump();
  write_u64(os, h.size());
  os.write(h.data(), std::streamsize(h.size()));
  for (const auto& f : c.frames) write_frame_binary(os, f);
}

inline PoseClip read_clip_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kClipMagic, 8) != 0) fail(Errc::DataError, "bad clip magic");
  uint64_t hlen = read_u64(is);
  std::string h(hlen, '\0');
  is.read(h.data(), std::streamsize(hlen));
  json header = json::parse(h);
  PoseClip c;
  c.id = header.at("id").get<std::string>();
  c.gloss = header.at("gloss").get<std::string>();
  c.signer = header.value("signer", "");
  c.fps = header.at("fps").get<double>();
  Schema s{header.at("schema").at("body").get<int>(), header.at("schema").at("face").get<int>(),
           header.at("schema").at("hand").get<int>()};
  c.trim_start = header.at("trim").at(0).get<size_t>();
  c.trim_end = header.at("trim").at(1).get<size_t>();
  size_t n = header.at("frames").get<size_t>();
  c.frames.reserve(n);
  for (size_t k = 0; k < n; ++k) c.frames.push_back(read_frame_binary(is, s));
  return c;
}

// Sniffs text vs binary by the leading byte.
inline PoseClip load_clip(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot open clip file " + path);
  int first = f.peek();
  if (first == '{') return read_clip_text(f);
  return read_clip_binary(f);
}

inline void save_clip(const std::string& path, const PoseClip& c, bool binary) {
  std::ofstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot write clip file " + path);
  if (binary) write_clip_binary(f, c);
  else write_clip_text(f, c);
}

inline const char* marker_kind_tag(MarkerKind k) {
  switch (k) {
    case MarkerKind::Neutral: return "neutral";
    case MarkerKind::Gloss: return "gloss";
    case MarkerKind::Blend: return "blend";
  }
  return "?";
}

inline MarkerKind marker_kind_from(std::string_view s) {
  if (s == "neutral") return MarkerKind::Neutral;
  if (s == "gloss") return MarkerKind::Gloss;
  if (s == "blend") return MarkerKind::Blend;
  fail(Errc::DataError, "unknown marker kind '" + std::string(s) + "'");
}

inline json sequence_header_json(const PoseSequence& q) {
  json header;
  header["type"] = "posz";
  header["fps"] = q.fps;
  Schema s = q.frames.empty() ? Schema{} : schema_of(q.frames.front());
  header["schema"] = {{"body", s.body}, {"face", s.face}, {"hand", s.hand}};
  header["glosses"] = q.glosses;
  header["flags"] = {int(q.flags[0]), int(q.flags[1]), int(q.flags[2]), int(q.flags[3])};
  header["frames"] = q.frames.size();
  json markers = json::array();
  for (const auto& m : q.markers)
    markers.push_back({{"k", marker_kind_tag(m.kind)}, {"t", m.token_index}, {"u", m.unit}});
  header["markers"] = std::move(markers);
  return header;
}

inline PoseSequence sequence_from_header(const json& header) {
  PoseSequence q;
  q.fps = header.at("fps").get<double>();
  q.glosses = header.at("glosses").get<std::vector<std::string>>();
  auto fl = header.at("flags");
  for (int i = 0; i < 4; ++i) q.flags[i] = fl.at(i).get<int>() != 0;
  for (const auto& m : header.at("markers")) {
    FrameMarker fm;
    fm.kind = marker_kind_from(m.at("k").get<std::string>());
    fm.token_index = m.at("t").get<int>();
    fm.unit = m.at("u").get<std::string>();
    q.markers.push_back(std::move(fm));
  }
  return q;
}

inline void write_sequence_text(std::ostream& os, const PoseSequence& q) {
  os << sequence_header_json(q).dump() << "\n";
  for (const auto& f : q.frames) os << frame_to_json(f).dump() << "\n";
}

inline void write_sequence_binary(std::ostream& os, const PoseSequence& q) {
  os.write(kSeqMagic, 8);
  std::string h = sequence_header_json(q).dump();
  write_u64(os, h.size());
  os.write(h.data(), std::streamsize(h.size()));
  for (const auto& f : q.frames) write_frame_binary(os, f);
}

inline PoseSequence read_sequence_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(Errc::DataError, "empty sequence stream");
  json header = json::parse(line);
  if (header.value("type", "") != "posz") fail(Errc::DataError, "not a pose sequence header");
  PoseSequence q = sequence_from_header(header);
  Schema s{header.at("schema").at("body").get<int>(), header.at("schema").at("face").get<int>(),
           header.at("schema").at("hand").get<int>()};
  size_t n = header.at("frames").get<size_t>();
  for (size_t k = 0; k < n; ++k) {
    if (!std::getline(is, line)) fail(Errc::DataError, "sequence truncated at frame " + std::to_string(k));
    q.frames.push_back(frame_from_json(json::parse(line), s));
  }
  return q;
}

inline PoseSequence read_sequence_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kSeqMagic, 8) != 0) fail(Errc::DataError, "bad sequence magic");
  uint64_t hlen = read_u64(is);
  std::string h(hlen, '\0');
  is.read(h.data(), std::streamsize(hlen));
  json header = json::parse(h);
  PoseSequence q = sequence_from_header(header);
  Schema s{header.at("schema").at("body").get<int>(), header.at("schema").at("face").get<int>(),
           header.at("schema").at("hand").get<int>()};
  size_t n = header.at("frames").get<size_t>();
  q.frames.reserve(n);
  for (size_t k = 0; k < n; ++k) q.frames.push_back(read_frame_binary(is, s));
  return q;
}

inline PoseSequence load_sequence(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot open sequence file " + path);
  int first = f.peek();
  if (first == '{') return read_sequence_text(f);
  return read_sequence_binary(f);
}

inline void save_sequence(const std::string& path, const PoseSequence& q, bool binary) {
  std::ofstream f(path, std::ios::binary);
  if (!f.good()) fail(Errc::IoError, "cannot write sequence file " + path);
  if (binary) write_sequence_binary(f, q);
  else write_sequence_text(f, q);
}

}  // namespace io

// Rest pose: hands together just below the canvas center, face forward.
// Committed as a data asset by the demo generator; dictionary builds may
// override it with the median of configured rest clips.
inline PoseFrame make_neutral_pose(const Schema& s = Schema{}) {
  PoseFrame f = PoseFrame::zeros(s);
  auto set_body = [&](int i, double x, double y) {
    if (i < s.body) f.body[i] = {x, y};
  };
  // Default landmarks roughly at a seated rest posture in [0,1]^2 canvas units.
  for (int i = 0; i < s.body; ++i) f.body[i] = {0.5, 0.5};
  set_body(body_idx::kNose, 0.5, 0.16);
  set_body(1, 0.48, 0.14);
  set_body(2, 0.47, 0.14);
  set_body(3, 0.46, 0.14);
  set_body(4, 0.52, 0.14);
  set_body(5, 0.53, 0.14);
  set_body(6, 0.54, 0.14);
  set_body(7, 0.44, 0.16);   // left ear
  set_body(8, 0.56, 0.16);   // right ear
  set_body(9, 0.48, 0.20);
  set_body(10, 0.52, 0.20);
  set_body(body_idx::kLeftShoulder, 0.38, 0.32);
  set_body(body_idx::kRightShoulder, 0.62, 0.32);
  set_body(body_idx::kLeftElbow, 0.34, 0.50);
  set_body(body_idx::kRightElbow, 0.66, 0.50);
  set_body(body_idx::kLeftWrist, 0.46, 0.64);
  set_body(body_idx::kRightWrist, 0.54, 0.64);
  set_body(17, 0.45, 0.68);
  set_body(18, 0.55, 0.68);
  set_body(19, 0.46, 0.67);
  set_body(20, 0.54, 0.67);
  set_body(21, 0.47, 0.66);
  set_body(22, 0.53, 0.66);
  set_body(body_idx::kLeftHip, 0.42, 0.78);
  set_body(body_idx::kRightHip, 0.58, 0.78);
  for (int i = 25; i < s.body; ++i) f.body[i] = {0.5, 0.9};

  // Face: oval cloud around the head centre. Deterministic rational layout.
  const double cx = 0.5, cy = 0.16, rx = 0.065, ry = 0.085;
  for (int i = 0; i < s.face; ++i) {
    // spiral over a fixed integer lattice, no transcendentals
    int ring = i % 12;
    int spoke = i / 12;
    double u = (double(ring) / 12.0) * 2.0 - 1.0;        // -1..1
    double v = (double(spoke % 40) / 40.0) * 2.0 - 1.0;  // -1..1
    f.face[i] = {cx + rx * u * (1.0 - 0.3 * v * v), cy + ry * v};
  }

  // Hands: together at rest just below canvas centre.
  auto hand_at = [&](std::vector<Vec3>& h, double bx, double by, double dir) {
    for (int i = 0; i < s.hand; ++i) h[i] = {bx, by, 0.0};
    for (int finger = 0; finger < 5; ++finger) {
      for (int joint = 1; joint < 5; ++joint) {
        int idx = pose::hand_idx::kFingerChains[finger][joint];
        if (idx < s.hand)
          h[idx] = {bx + dir * 0.004 * (finger + 1) * joint * 0.25, by + 0.012 * joint, -0.002 * joint};
      }
    }
  };
  hand_at(f.left_hand, 0.46, 0.66, -1.0);
  hand_at(f.right_hand, 0.54, 0.66, 1.0);
  return f;
}

}  // namespace slgen::pose
