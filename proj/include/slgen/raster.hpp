#pragma once

// Deterministic conditioning-frame renderer. Landmarks snap to 1/16-pixel
// fixed point, polygons fill with an integer edge-function scanline (top-left
// rule), so identical inputs give byte-identical pixels on any platform.
// Scene: dual-axis gradient background, gray convex body/face polygons,
// face-body connection strokes, per-finger hand palettes switched by palm
// orientation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "slgen/png.hpp"
#include "slgen/pose.hpp"

namespace slgen::raster {

using png::Image;

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

enum class PalmOrientation { In, Out };

struct HandPalette {
  Rgb base_out, base_in;                 // hull fill per orientation
  std::array<Rgb, 5> fingers_out{};     // thumb..pinky
  std::array<Rgb, 5> fingers_in{};
};

struct RasterStyle {
  int width = 512;
  int height = 512;
  // Gradient channel ceilings; pixel (x,y) ramps black->red downward and
  // black->green rightward.
  int gradient_red_max = 255;
  int gradient_green_max = 255;
  Rgb torso_shade{90, 90, 90};
  Rgb arm_shade{120, 120, 120};
  Rgb face_shade{170, 170, 170};
  Rgb connection_shade{140, 140, 140};
  HandPalette left_hand;
  HandPalette right_hand;
  double margin = 0.1;  // normalized frame maps to the central 80%
  int limb_thickness_px = 10;
  int finger_thickness_px = 4;
  int connection_thickness_px = 2;
  // face landmark index <-> body landmark index stroke pairs
  std::vector<std::pair<int, int>> face_body_connections;
};

inline RasterStyle default_style() {
  RasterStyle s;
  s.left_hand.base_out = {60, 90, 200};
  s.left_hand.base_in = {40, 60, 140};
  s.left_hand.fingers_out = {Rgb{90, 140, 255}, Rgb{70, 170, 235}, Rgb{110, 110, 255},
                             Rgb{60, 200, 220}, Rgb{130, 90, 235}};
  s.left_hand.fingers_in = {Rgb{60, 95, 175}, Rgb{45, 115, 160}, Rgb{75, 75, 175},
                            Rgb{40, 135, 150}, Rgb{90, 60, 160}};
  s.right_hand.base_out = {200, 120, 40};
  s.right_hand.base_in = {140, 80, 30};
  s.right_hand.fingers_out = {Rgb{255, 160, 60}, Rgb{235, 190, 70}, Rgb{255, 120, 90},
                              Rgb{220, 210, 60}, Rgb{235, 100, 130}};
  s.right_hand.fingers_in = {Rgb{175, 110, 45}, Rgb{160, 130, 50}, Rgb{175, 85, 65},
                             Rgb{150, 145, 45}, Rgb{160, 70, 90}};
  s.face_body_connections = {{234, 11}, {454, 12}, {152, 11}, {152, 12}};
  return s;
}

// ------------------------------------------------------------ style asset

namespace io {

using nlohmann::json;

inline json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }
inline Rgb rgb_from(const json& j) {
  return Rgb{uint8_t(j.at(0).get<int>()), uint8_t(j.at(1).get<int>()), uint8_t(j.at(2).get<int>())};
}

inline json palette_json(const HandPalette& p) {
  json j;
  j["base_out"] = rgb_json(p.base_out);
  j["base_in"] = rgb_json(p.base_in);
  j["fingers_out"] = json::array();
  j["fingers_in"] = json::array();
  for (const auto& c : p.fingers_out) j["fingers_out"].push_back(rgb_json(c));
  for (const auto& c : p.fingers_in) j["fingers_in"].push_back(rgb_json(c));
  return j;
}

inline HandPalette palette_from(const json& j) {
  HandPalette p;
  p.base_out = rgb_from(j.at("base_out"));
  p.base_in = rgb_from(j.at("base_in"));
  for (int i = 0; i < 5; ++i) {
    p.fingers_out[i] = rgb_from(j.at("fingers_out").at(i));
    p.fingers_in[i] = rgb_from(j.at("fingers_in").at(i));
  }
  return p;
}

inline json style_json(const RasterStyle& s) {
  json j;
  j["canvas"] = {{"width", s.width}, {"height", s.height}};
  j["gradient"] = {{"red_max", s.gradient_red_max}, {"green_max", s.gradient_green_max}};
  j["torso_shade"] = rgb_json(s.torso_shade);
  j["arm_shade"] = rgb_json(s.arm_shade);
  j["face_shade"] = rgb_json(s.face_shade);
  j["connection_shade"] = rgb_json(s.connection_shade);
  j["left_hand"] = palette_json(s.left_hand);
  j["right_hand"] = palette_json(s.right_hand);
  j["margin"] = s.margin;
  j["limb_thickness_px"] = s.limb_thickness_px;
  j["finger_thickness_px"] = s.finger_thickness_px;
  j["connection_thickness_px"] = s.connection_thickness_px;
  j["face_body_connections"] = json::array();
  for (auto [f, b] : s.face_body_connections) j["face_body_connections"].push_back({f, b});
  return j;
}

inline RasterStyle style_from(const json& j) {
  RasterStyle s = default_style();
  s.width = j.at("canvas").at("width").get<int>();
  s.height = j.at("canvas").at("height").get<int>();
  s.gradient_red_max = j.at("gradient").at("red_max").get<int>();
  s.gradient_green_max = j.at("gradient").at("green_max").get<int>();
  if (s.gradient_red_max < 0 || s.gradient_red_max > 255 || s.gradient_green_max < 0 ||
      s.gradient_green_max > 255)
    fail(Errc::ConfigError, "gradient range outside 8-bit channel bounds");
  s.torso_shade = rgb_from(j.at("torso_shade"));
  s.arm_shade = rgb_from(j.at("arm_shade"));
  s.face_shade = rgb_from(j.at("face_shade"));
  s.connection_shade = rgb_from(j.at("connection_shade"));
  s.left_hand = palette_from(j.at("left_hand"));
  s.right_hand = palette_from(j.at("right_hand"));
  s.margin = j.at("margin").get<double>();
  s.limb_thickness_px = j.at("limb_thickness_px").get<int>();
  s.finger_thickness_px = j.at("finger_thickness_px").get<int>();
  s.connection_thickness_px = j.at("connection_thickness_px").get<int>();
  s.face_body_connections.clear();
  for (const auto& pair : j.at("face_body_connections"))
    s.face_body_connections.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  if (s.left_hand.fingers_out == s.right_hand.fingers_out)
    fail(Errc::ConfigError, "left and right hands must not share a palette");
  return s;
}

}  // namespace io

// -------------------------------------------------------- fixed-point fill

namespace detail {

// 1/16-pixel fixed-point lattice point.
struct Fx {
  int64_t x = 0, y = 0;
  bool operator==(const Fx&) const = default;
  bool operator<(const Fx& o) const { return x != o.x ? x < o.x : y < o.y; }
};

constexpr int64_t kSub = 16;

inline Fx snap(double px, double py) {
  return Fx{int64_t(std::llround(px * double(kSub))), int64_t(std::llround(py * double(kSub)))};
}

inline int64_t cross(const Fx& o, const Fx& a, const Fx& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain; collinear points dropped. Output may have <3 points for
// degenerate input.
inline std::vector<Fx> convex_hull(std::vector<Fx> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Fx> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline void put_pixel(Image& img, int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  size_t i = (size_t(y) * img.width + x) * 3;
  img.rgb[i] = c.r;
  img.rgb[i + 1] = c.g;
  img.rgb[i + 2] = c.b;
}

// Integer edge-function fill with the top-left rule; pixel centers sit at
// 16*p + 8 on the fixed-point lattice.
inline void fill_convex(Image& img, std::vector<Fx> poly, Rgb color) {
  if (poly.size() < 3) {
    // degenerate geometry collapses to its pixel cell
    for (const auto& p : poly) put_pixel(img, int(p.x / kSub), int(p.y / kSub), color);
    return;
  }
  // enforce positive orientation
  int64_t area2 = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Fx& a = poly[i];
    const Fx& b = poly[(i + 1) % poly.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  if (area2 == 0) {
    for (const auto& p : poly) put_pixel(img, int(p.x / kSub), int(p.y / kSub), color);
    return;
  }
  if (area2 < 0) std::reverse(poly.begin(), poly.end());

  int64_t min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  for (const auto& p : poly) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  int x0 = std::max<int64_t>(0, min_x / kSub - 1);
  int y0 = std::max<int64_t>(0, min_y / kSub - 1);
  int x1 = std::min<int64_t>(img.width - 1, max_x / kSub + 1);
  int y1 = std::min<int64_t>(img.height - 1, max_y / kSub + 1);

  size_t m = poly.size();
  std::vector<int64_t> ex(m), ey(m), bias(m);
  for (size_t i = 0; i < m; ++i) {
    const Fx& a = poly[i];
    const Fx& b = poly[(i + 1) % m];
    ex[i] = b.x - a.x;
    ey[i] = b.y - a.y;
    bool top = ey[i] == 0 && ex[i] > 0;
    bool left = ey[i] > 0;
    bias[i] = (top || left) ? 0 : -1;
  }
  for (int y = y0; y <= y1; ++y) {
    int64_t cy = int64_t(y) * kSub + kSub / 2;
    for (int x = x0; x <= x1; ++x) {
      int64_t cx = int64_t(x) * kSub + kSub / 2;
      bool inside = true;
      for (size_t i = 0; i < m; ++i) {
        int64_t e = ex[i] * (cy - poly[i].y) - ey[i] * (cx - poly[i].x);
        if (e + bias[i] < 0) {
          inside = false;
          break;
        }
      }
      if (inside) put_pixel(img, x, y, color);
    }
  }
}

// Thick segment as a filled quad; zero-length segments paint a square cap.
inline void stroke(Image& img, const Fx& a, const Fx& b, double thickness_px, Rgb color) {
  double dx = double(b.x - a.x), dy = double(b.y - a.y);
  double len = std::sqrt(dx * dx + dy * dy);
  double half = thickness_px * double(kSub) * 0.5;
  if (len < 1.0) {
    int64_t h = int64_t(std::llround(half));
    fill_convex(img, {Fx{a.x - h, a.y - h}, Fx{a.x + h, a.y - h}, Fx{a.x + h, a.y + h}, Fx{a.x - h, a.y + h}},
                color);
    return;
  }
  double nx = -dy / len * half, ny = dx / len * half;
  int64_t ox = int64_t(std::llround(nx)), oy = int64_t(std::llround(ny));
  fill_convex(img, {Fx{a.x + ox, a.y + oy}, Fx{b.x + ox, b.y + oy}, Fx{b.x - ox, b.y - oy},
                    Fx{a.x - ox, a.y - oy}},
              color);
}

}  // namespace detail

// --------------------------------------------------------------- drawing

inline Image draw_background(const RasterStyle& style) {
  Image img;
  img.width = style.width;
  img.height = style.height;
  img.rgb.resize(size_t(style.width) * style.height * 3);
  for (int y = 0; y < style.height; ++y) {
    uint8_t r = style.height > 1
                    ? uint8_t(std::llround(double(style.gradient_red_max) * y / double(style.height - 1)))
                    : 0;
    for (int x = 0; x < style.width; ++x) {
      uint8_t g = style.width > 1
                      ? uint8_t(std::llround(double(style.gradient_green_max) * x / double(style.width - 1)))
                      : 0;
      size_t i = (size_t(y) * style.width + x) * 3;
      img.rgb[i] = r;
      img.rgb[i + 1] = g;
      img.rgb[i + 2] = 0;
    }
  }
  return img;
}

// Surface normal of the palm triangle (index base - wrist) x (pinky base -
// wrist); positive z faces the camera.
inline PalmOrientation palm_orientation(const std::vector<pose::Vec3>& hand) {
  if (hand.size() <= size_t(pose::hand_idx::kPinkyBase)) fail(Errc::SchemaMismatch, "hand has too few points");
  const auto& w = hand[pose::hand_idx::kWrist];
  const auto& ib = hand[pose::hand_idx::kIndexBase];
  const auto& pb = hand[pose::hand_idx::kPinkyBase];
  double ux = ib.x - w.x, uy = ib.y - w.y, uz = ib.z - w.z;
  double vx = pb.x - w.x, vy = pb.y - w.y, vz = pb.z - w.z;
  double cx = uy * vz - uz * vy;
  double cy = uz * vx - ux * vz;
  double cz = ux * vy - uy * vx;
  double cross_norm = std::sqrt(cx * cx + cy * cy + cz * cz);
  double u_norm = std::sqrt(ux * ux + uy * uy + uz * uz);
  double v_norm = std::sqrt(vx * vx + vy * vy + vz * vz);
  if (cross_norm <= 1e-9 * u_norm * v_norm || u_norm == 0.0 || v_norm == 0.0)
    fail(Errc::DegenerateHand, "palm spanning vectors are parallel");
  return cz > 0 ? PalmOrientation::Out : PalmOrientation::In;
}

struct RenderResult {
  Image image;
  bool left_hand_degenerate = false;
  bool right_hand_degenerate = false;
};

namespace detail {

inline Fx map_point(const RasterStyle& s, double u, double v) {
  double px = (s.margin + (1.0 - 2.0 * s.margin) * u) * double(s.width);
  double py = (s.margin + (1.0 - 2.0 * s.margin) * v) * double(s.height);
  return snap(px, py);
}

inline void draw_hand(Image& img, const RasterStyle& style, const std::vector<pose::Vec3>& hand,
                      const HandPalette& palette, bool& degenerate_flag) {
  PalmOrientation orient = PalmOrientation::In;
  try {
    orient = palm_orientation(hand);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateHand) throw;
    degenerate_flag = true;  // fall back to the In palette
  }
  bool out = orient == PalmOrientation::Out;
  std::vector<Fx> pts;
  pts.reserve(hand.size());
  for (const auto& p : hand) pts.push_back(map_point(style, p.x, p.y));
  fill_convex(img, convex_hull(pts), out ? palette.base_out : palette.base_in);
  for (int finger = 0; finger < 5; ++finger) {
    Rgb color = out ? palette.fingers_out[finger] : palette.fingers_in[finger];
    const auto& chain = pose::hand_idx::kFingerChains[finger];
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      if (chain[k] >= int(hand.size()) || chain[k + 1] >= int(hand.size())) break;
      stroke(img, pts[chain[k]], pts[chain[k + 1]], style.finger_thickness_px, color);
    }
  }
}

}  // namespace detail

// Draw order, back to front: background, torso, arms, face, face-body
// connections, left hand, right hand.
inline RenderResult draw_frame(const pose::PoseFrame& frame, const RasterStyle& style) {
  if (!frame.all_valid()) fail(Errc::DataError, "draw_frame requires a fully valid frame");
  RenderResult res;
  res.image = draw_background(style);
  Image& img = res.image;

  auto bp = [&](int i) { return detail::map_point(style, frame.body[i].x, frame.body[i].y); };

  // torso hull
  {
    std::vector<detail::Fx> pts{bp(pose::body_idx::kLeftShoulder), bp(pose::body_idx::kRightShoulder),
                                bp(pose::body_idx::kRightHip), bp(pose::body_idx::kLeftHip)};
    detail::fill_convex(img, detail::convex_hull(pts), style.torso_shade);
  }
  // arms as thick limb segments
  auto limb = [&](int a, int b) {
    detail::stroke(img, bp(a), bp(b), style.limb_thickness_px, style.arm_shade);
  };
  limb(pose::body_idx::kLeftShoulder, pose::body_idx::kLeftElbow);
  limb(pose::body_idx::kLeftElbow, pose::body_idx::kLeftWrist);
  limb(pose::body_idx::kRightShoulder, pose::body_idx::kRightElbow);
  limb(pose::body_idx::kRightElbow, pose::body_idx::kRightWrist);

  // face hull
  {
    std::vector<detail::Fx> pts;
    pts.reserve(frame.face.size());
    for (const auto& p : frame.face) pts.push_back(detail::map_point(style, p.x, p.y));
    detail::fill_convex(img, detail::convex_hull(pts), style.face_shade);
  }
  // face-body connections
  for (auto [fi, bi] : style.face_body_connections) {
    if (fi < 0 || fi >= int(frame.face.size()) || bi < 0 || bi >= int(frame.body.size())) continue;
    detail::stroke(img, detail::map_point(style, frame.face[fi].x, frame.face[fi].y), bp(bi),
                   style.connection_thickness_px, style.connection_shade);
  }
  detail::draw_hand(img, style, frame.left_hand, style.left_hand, res.left_hand_degenerate);
  detail::draw_hand(img, style, frame.right_hand, style.right_hand, res.right_hand_degenerate);
  return res;
}

}  // namespace slgen::raster
