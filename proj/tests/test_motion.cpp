#include "slgen/motion.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace slgen;
using namespace slgen::motion;
using pose::PoseClip;
using pose::PoseFrame;
using pose::Schema;
using posedict::SignDictionary;

namespace {

// Dictionary built directly from preprocessed clips, bypassing normalization,
// so tests control endpoint geometry exactly.
SignDictionary direct_dict(std::vector<PoseClip> clips, const Schema& s) {
  SignDictionary dict;
  dict.neutral_pose = pose::make_neutral_pose(s);
  for (auto& c : clips) {
    dict.by_gloss[c.gloss].push_back(c.id);
    dict.clips[c.id] = std::move(c);
  }
  return dict;
}

PoseClip clip_between(const std::string& id, const std::string& gloss, const PoseFrame& a,
                      const PoseFrame& b, size_t n, double fps = 90.0) {
  PoseClip c;
  c.id = id;
  c.gloss = gloss;
  c.fps = fps;
  for (size_t t = 0; t < n; ++t) c.frames.push_back(pose::lerp(a, b, n == 1 ? 0.0 : double(t) / double(n - 1)));
  c.trim_end = n;
  return c;
}

}  // namespace

TEST_CASE("transition cost is zero when endpoints match") {
  Schema s = testutil::small_schema();
  std::mt19937_64 rng(1);
  PoseFrame f = testutil::frame_at(s, 0.5, 0.5, rng);
  CHECK(transition_cost(f, f, MatchWeights{}) == 0.0);
}

TEST_CASE("transition cost matches the weighted squared-distance formula") {
  Schema s = testutil::small_schema();
  PoseFrame a = PoseFrame::zeros(s);
  PoseFrame b = a;
  b.left_hand[3] = {1.0, 0.0, 0.0};  // single hand point offset by (1,0,0)
  MatchWeights w{0.0, 0.0, 1.0};
  CHECK_THAT(transition_cost(a, b, w), Catch::Matchers::WithinAbs(1.0, 1e-12));

  PoseFrame c = a;
  c.left_hand[3] = {0.0, 2.0, 0.0};
  CHECK_THAT(transition_cost(a, c, w), Catch::Matchers::WithinAbs(4.0, 1e-12));
  // variant with cost 1 beats variant with cost 4
  CHECK(transition_cost(a, b, w) < transition_cost(a, c, w));
}

TEST_CASE("transition cost rejects mismatched schemas") {
  PoseFrame a = PoseFrame::zeros(Schema{33, 8, 21});
  PoseFrame b = PoseFrame::zeros(Schema{33, 12, 21});
  CHECK_THROWS_MATCHES(transition_cost(a, b, MatchWeights{}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::SchemaMismatch; }));
}

TEST_CASE("all-zero weights are rejected") {
  PoseFrame a = PoseFrame::zeros(testutil::small_schema());
  CHECK_THROWS_AS(transition_cost(a, a, MatchWeights{0, 0, 0}), Error);
}

TEST_CASE("expand_units maps fingerspelling to per-letter units") {
  auto g = gloss::parse_gloss("KID fs-P-A-R-K-QMwg GIVE");
  auto units = expand_units(g);
  REQUIRE(units.size() == 7);
  CHECK(units[0].gloss == "KID");
  CHECK(units[1].gloss == "fs-P");
  CHECK(units[4].gloss == "fs-K");
  CHECK(units[5].gloss == "QMwg");
  CHECK(units[6].gloss == "GIVE");
  CHECK(units[1].token_index == 1);
  CHECK(units[1].fingerspelling);
  CHECK_FALSE(units[5].fingerspelling);
}

TEST_CASE("select_variants picks the single variant when only one exists") {
  Schema s = testutil::small_schema();
  auto c = testutil::make_clip("only", "GIVE", 6, 5, 90.0);
  auto dict = direct_dict({c}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("GIVE"), MatchWeights{});
  REQUIRE(plan.chosen.size() == 1);
  CHECK(plan.chosen[0] == "only");
  CHECK(plan.costs.size() == 1);
}

TEST_CASE("select_variants equals exhaustive per-step argmin on a hand-built fixture") {
  Schema s = testutil::small_schema();
  PoseFrame neutral = pose::make_neutral_pose(s);
  PoseFrame near_neutral = neutral;
  near_neutral.left_hand[0].x += 0.01;
  PoseFrame far_pose = neutral;
  far_pose.left_hand[0].x += 0.5;
  PoseFrame mid_pose = neutral;
  mid_pose.left_hand[0].x += 0.25;

  // gloss A: a1 starts near neutral, a2 starts far; greedy must take a1.
  auto a1 = clip_between("a1", "A", near_neutral, mid_pose, 5);
  auto a2 = clip_between("a2", "A", far_pose, far_pose, 5);
  // gloss B: b1 starts near a1's end (mid), b2 near neutral; greedy takes b1.
  auto b1 = clip_between("b1", "B", mid_pose, neutral, 5);
  auto b2 = clip_between("b2", "B", neutral, far_pose, 5);
  auto dict = direct_dict({a1, a2, b1, b2}, s);
  MatchWeights w;
  auto plan = select_variants(dict, gloss::parse_gloss("A B"), w);
  CHECK(plan.chosen == std::vector<std::string>{"a1", "b1"});
  // entry 0 is the distance from neutral
  CHECK_THAT(plan.costs[0],
             Catch::Matchers::WithinAbs(transition_cost(neutral, a1.frames.front(), w), 1e-12));
}

TEST_CASE("select_variants ties break toward the smallest clip id") {
  Schema s = testutil::small_schema();
  PoseFrame p = pose::make_neutral_pose(s);
  auto c1 = clip_between("z2", "A", p, p, 4);
  auto c2 = clip_between("a1", "A", p, p, 4);
  auto dict = direct_dict({c1, c2}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A"), MatchWeights{});
  CHECK(plan.chosen[0] == "a1");
}

TEST_CASE("select_variants greedy step optimality on random dictionaries (property)") {
  std::mt19937_64 rng(555);
  Schema s = testutil::small_schema();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PoseClip> clips;
    std::vector<std::string> glosses;
    size_t n_glosses = 1 + rng() % 4;
    for (size_t gi = 0; gi < n_glosses; ++gi) {
      std::string g = "G" + std::to_string(gi);
      glosses.push_back(g);
      size_t variants = 1 + rng() % 3;
      for (size_t v = 0; v < variants; ++v)
        clips.push_back(testutil::make_clip(g + "_v" + std::to_string(v), g, 4 + rng() % 4, rng(), 90.0));
    }
    auto dict = direct_dict(clips, s);
    MatchWeights w{1.0, 0.25, 0.5};
    auto plan = select_variants(dict, gloss::parse_gloss(str::join(glosses, " ")), w);

    const PoseFrame* prev = &dict.neutral_pose;
    for (size_t k = 0; k < plan.units.size(); ++k) {
      auto cands = dict.by_gloss.at(plan.units[k].gloss);
      std::sort(cands.begin(), cands.end());
      double best = std::numeric_limits<double>::infinity();
      std::string best_id;
      for (const auto& id : cands) {
        double c = transition_cost(*prev, dict.clip(id).frames.front(), w);
        if (c < best) {
          best = c;
          best_id = id;
        }
      }
      CHECK(plan.chosen[k] == best_id);
      CHECK(plan.costs[k] <= best + 1e-12);
      prev = &dict.clip(plan.chosen[k]).frames.back();
    }
  }
}

TEST_CASE("weight scaling leaves chosen clips unchanged (property)") {
  std::mt19937_64 rng(777);
  Schema s = testutil::small_schema();
  std::vector<PoseClip> clips;
  for (int v = 0; v < 3; ++v) {
    clips.push_back(testutil::make_clip("a" + std::to_string(v), "A", 5, rng(), 90.0));
    clips.push_back(testutil::make_clip("b" + std::to_string(v), "B", 5, rng(), 90.0));
  }
  auto dict = direct_dict(clips, s);
  auto g = gloss::parse_gloss("A B A");
  auto base = select_variants(dict, g, MatchWeights{1.0, 0.25, 0.5});
  for (double scale : {0.1, 3.0, 42.0}) {
    auto scaled = select_variants(dict, g, MatchWeights{1.0 * scale, 0.25 * scale, 0.5 * scale});
    CHECK(scaled.chosen == base.chosen);
  }
}

TEST_CASE("select_variants errors") {
  Schema s = testutil::small_schema();
  auto dict = direct_dict({testutil::make_clip("c", "GIVE", 5, 3, 90.0)}, s);
  gloss::GlossSentence empty;
  CHECK_THROWS_MATCHES(select_variants(dict, empty, MatchWeights{}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::MissingGloss; }));
  CHECK_THROWS_MATCHES(select_variants(dict, gloss::parse_gloss("TAKE"), MatchWeights{}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::MissingGloss; }));
}

TEST_CASE("blend frame count follows the overlap formula") {
  Schema s = testutil::small_schema();
  PoseFrame neutral = pose::make_neutral_pose(s);
  // two 1 s clips at 90 Hz, window 20, bookends 45 frames
  auto c1 = clip_between("c1", "A", neutral, neutral, 90);
  auto c2 = clip_between("c2", "B", neutral, neutral, 90);
  auto dict = direct_dict({c1, c2}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A B"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  CHECK(seq.frames.size() == 45 + 90 + 90 + 45 - 3 * 20);
  CHECK(seq.fps == 90.0);
  CHECK(seq.markers.size() == seq.frames.size());
}

TEST_CASE("blending identical constant clips at neutral stays constant") {
  Schema s = testutil::small_schema();
  PoseFrame neutral = pose::make_neutral_pose(s);
  auto c1 = clip_between("c1", "A", neutral, neutral, 60);
  auto c2 = clip_between("c2", "B", neutral, neutral, 60);
  auto dict = direct_dict({c1, c2}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A B"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  for (const auto& f : seq.frames) CHECK(pose::max_landmark_displacement(f, neutral) < 1e-12);
}

TEST_CASE("crossfade midpoint averages the two sources") {
  PoseFrame a = PoseFrame::zeros(testutil::small_schema());
  PoseFrame b = a;
  pose::for_each_coord(b, [](pose::Group, size_t, int, double& v) { v = 2.0; });
  PoseFrame mid = pose::lerp(a, b, 0.5);
  pose::for_each_coord(mid, [](pose::Group, size_t, int, double& v) { CHECK(v == 1.0); });
}

TEST_CASE("blend output starts and ends at neutral") {
  std::mt19937_64 rng(4242);
  Schema s = testutil::small_schema();
  std::vector<PoseClip> clips;
  for (int v = 0; v < 4; ++v)
    clips.push_back(testutil::make_clip("c" + std::to_string(v), "G" + std::to_string(v), 20 + rng() % 40,
                                        rng(), 90.0));
  auto dict = direct_dict(clips, s);
  auto plan = select_variants(dict, gloss::parse_gloss("G0 G1 G2 G3"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  CHECK(pose::max_landmark_displacement(seq.frames.front(), dict.neutral_pose) < 1e-9);
  CHECK(pose::max_landmark_displacement(seq.frames.back(), dict.neutral_pose) < 1e-9);
}

TEST_CASE("blend continuity bound (property)") {
  std::mt19937_64 rng(31337);
  Schema s = testutil::small_schema();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<PoseClip> clips;
    size_t n_glosses = 2 + rng() % 3;
    std::vector<std::string> glosses;
    for (size_t gi = 0; gi < n_glosses; ++gi) {
      std::string g = "G" + std::to_string(gi);
      glosses.push_back(g);
      clips.push_back(testutil::make_clip(g + "_v0", g, 10 + rng() % 30, rng(), 30.0));
    }
    auto dict = direct_dict(clips, s);
    size_t window = 20;
    double fps = 90.0;
    auto plan = select_variants(dict, gloss::parse_gloss(str::join(glosses, " ")), MatchWeights{}, window, fps);
    auto seq = blend(plan, dict);

    // reconstruct the resampled segments the blender consumed
    std::vector<std::vector<PoseFrame>> segs;
    size_t bookend = size_t(std::llround(0.5 * fps));
    segs.push_back(std::vector<PoseFrame>(bookend, dict.neutral_pose));
    for (const auto& id : plan.chosen) {
      PoseClip c = dict.clip(id);
      c = posedict::retime(c, c.fps / fps);
      segs.push_back(c.frames);
    }
    segs.push_back(std::vector<PoseFrame>(bookend, dict.neutral_pose));

    size_t K = window;
    for (const auto& sg : segs) K = std::min(K, sg.size() / 2);
    if (K < 1) K = 1;

    double max_intra = 0.0;
    for (const auto& sg : segs)
      for (size_t t = 1; t < sg.size(); ++t)
        max_intra = std::max(max_intra, pose::max_landmark_displacement(sg[t - 1], sg[t]));
    double max_gap = 0.0;
    for (size_t j = 1; j < segs.size(); ++j) {
      const auto& prev = segs[j - 1];
      const auto& next = segs[j];
      for (size_t k = 0; k < K; ++k)
        max_gap = std::max(max_gap,
                           pose::max_landmark_displacement(prev[prev.size() - K + k], next[k]));
    }
    double bound = max_intra + max_gap / double(std::max<size_t>(K - 1, 1)) + 1e-9;

    for (size_t t = 1; t < seq.frames.size(); ++t) {
      double step = pose::max_landmark_displacement(seq.frames[t - 1], seq.frames[t]);
      REQUIRE(step <= bound);
    }
  }
}

TEST_CASE("expression blending: all-false flags give bit-identical frames") {
  Schema s = testutil::small_schema();
  auto dict = direct_dict({testutil::make_clip("c", "A", 30, 9, 90.0)}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  ExpressionProfile profile;
  profile.brow_indices = {0, 1, 2};
  auto out = blend_expressions(seq, LinguisticFlags{}, profile);
  REQUIRE(out.frames.size() == seq.frames.size());
  for (size_t t = 0; t < seq.frames.size(); ++t) CHECK(out.frames[t] == seq.frames[t]);
}

TEST_CASE("expression blending shifts only brow landmarks") {
  Schema s = testutil::small_schema();
  auto dict = direct_dict({testutil::make_clip("c", "A", 60, 10, 90.0)}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  ExpressionProfile profile;
  profile.brow_indices = {1, 3};
  profile.raise_delta = 0.02;
  profile.furrow_delta = 0.01;

  SECTION("ynq raises brows by exactly (0, -delta) mid-sequence") {
    auto out = blend_expressions(seq, LinguisticFlags{true, false, false, false}, profile);
    size_t mid = seq.frames.size() / 2;
    for (int idx : profile.brow_indices) {
      CHECK_THAT(out.frames[mid].face[idx].y - seq.frames[mid].face[idx].y,
                 Catch::Matchers::WithinAbs(-0.02, 1e-12));
      CHECK(out.frames[mid].face[idx].x == seq.frames[mid].face[idx].x);
    }
    // every non-brow coordinate is bit-identical
    for (size_t t = 0; t < seq.frames.size(); ++t) {
      CHECK(out.frames[t].body == seq.frames[t].body);
      CHECK(out.frames[t].left_hand == seq.frames[t].left_hand);
      CHECK(out.frames[t].right_hand == seq.frames[t].right_hand);
      for (size_t i = 0; i < seq.frames[t].face.size(); ++i) {
        if (i == 1 || i == 3) continue;
        CHECK(out.frames[t].face[i] == seq.frames[t].face[i]);
      }
    }
  }
  SECTION("whq furrows brows downward") {
    auto out = blend_expressions(seq, LinguisticFlags{false, true, false, false}, profile);
    size_t mid = seq.frames.size() / 2;
    CHECK_THAT(out.frames[mid].face[1].y - seq.frames[mid].face[1].y,
               Catch::Matchers::WithinAbs(0.01, 1e-12));
  }
  SECTION("ynq wins when both question flags are set") {
    auto out = blend_expressions(seq, LinguisticFlags{true, true, false, false}, profile);
    size_t mid = seq.frames.size() / 2;
    CHECK(out.frames[mid].face[1].y < seq.frames[mid].face[1].y);
  }
  SECTION("conditional and negation flags pass through as metadata only") {
    auto out = blend_expressions(seq, LinguisticFlags{false, false, true, true}, profile);
    for (size_t t = 0; t < seq.frames.size(); ++t) CHECK(out.frames[t] == seq.frames[t]);
    CHECK(out.flags[2]);
    CHECK(out.flags[3]);
  }
}

TEST_CASE("expression displacement ramps in and out at the edges") {
  Schema s = testutil::small_schema();
  auto dict = direct_dict({testutil::make_clip("c", "A", 120, 11, 90.0)}, s);
  auto plan = select_variants(dict, gloss::parse_gloss("A"), MatchWeights{}, 20, 90.0);
  auto seq = blend(plan, dict);
  ExpressionProfile profile;
  profile.brow_indices = {0};
  auto out = blend_expressions(seq, LinguisticFlags{true, false, false, false}, profile);
  CHECK(out.frames.front().face[0].y == seq.frames.front().face[0].y);  // no pop at frame 0
  CHECK(out.frames.back().face[0].y == seq.frames.back().face[0].y);
  size_t mid = seq.frames.size() / 2;
  CHECK(out.frames[mid].face[0].y < seq.frames[mid].face[0].y);
}
