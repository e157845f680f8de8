#pragma once

// Shared helpers for building deterministic synthetic clips in tests.

#include <random>
#include <string>
#include <vector>

#include "slgen/pose.hpp"

namespace testutil {

using slgen::pose::PoseClip;
using slgen::pose::PoseFrame;
using slgen::pose::Schema;

inline Schema small_schema() { return Schema{33, 8, 21}; }

inline double unit_rand(std::mt19937_64& rng) {
  return double(rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
}

// Frame with every landmark near `center`, jittered deterministically.
inline PoseFrame frame_at(const Schema& s, double cx, double cy, std::mt19937_64& rng,
                          double jitter = 0.02) {
  PoseFrame f = PoseFrame::zeros(s);
  auto j = [&]() { return (unit_rand(rng) - 0.5) * 2.0 * jitter; };
  for (auto& p : f.body) p = {cx + j(), cy + j()};
  // keep shoulders well-formed for normalization
  f.body[slgen::pose::body_idx::kLeftShoulder] = {cx - 0.12 + j() * 0.1, cy - 0.15};
  f.body[slgen::pose::body_idx::kRightShoulder] = {cx + 0.12 + j() * 0.1, cy - 0.15};
  for (auto& p : f.face) p = {cx + j() * 0.5, cy - 0.2 + j() * 0.5};
  for (auto& p : f.left_hand) p = {cx - 0.05 + j(), cy + 0.1 + j(), j() * 0.1};
  for (auto& p : f.right_hand) p = {cx + 0.05 + j(), cy + 0.1 + j(), j() * 0.1};
  return f;
}

inline PoseClip make_clip(const std::string& id, const std::string& gloss, size_t n_frames,
                          uint64_t seed, double fps = 30.0, const Schema& s = small_schema()) {
  std::mt19937_64 rng(seed);
  PoseClip c;
  c.id = id;
  c.gloss = gloss;
  c.signer = "test";
  c.fps = fps;
  double cx = 0.35 + 0.3 * unit_rand(rng);
  double cy = 0.4 + 0.2 * unit_rand(rng);
  for (size_t t = 0; t < n_frames; ++t) {
    double drift = 0.002 * double(t);
    c.frames.push_back(frame_at(s, cx + drift, cy, rng));
  }
  c.trim_end = n_frames;
  return c;
}

}  // namespace testutil
