#include <doctest.h>

#include <cmath>

#include "contconv/localize.hpp"
#include "contconv/object_tracker.hpp"
#include "contconv/synth.hpp"

using namespace contconv;

namespace {

SynthSpec scene_spec(int frames) {
    SynthSpec s;
    s.width = 192;
    s.height = 160;
    s.frames = frames;
    s.texture.kind = TextureSpec::Kind::Blobs;
    s.texture.blob_count = 160;
    s.texture.blob_sigma = 2.5;
    s.texture.seed = 11;
    return s;
}

ObjectConfig small_config() {
    ObjectConfig cfg;
    cfg.base_resolution = 32;
    cfg.init_cg_iters = 60;
    return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("object_tracker");

TEST_CASE("init localizes the target on its own frame") {
    const SyntheticSequence seq(scene_spec(2));
    const Image frame = seq.frame(0);
    const Box box{80.0, 64.0, 28.0, 24.0};
    const auto cfg = small_config();
    const auto st = init_target(frame, box, cfg);
    const auto fm = extract_object_features(frame, st.cx, st.cy, st.region_side, cfg);
    const auto s = apply_operator(st.filter, transform_query(fm));
    const auto loc = localize_peak(s, cfg.newton_iters);
    const double dx = (loc.t2 - 0.5) * st.region_side;
    const double dy = (loc.t1 - 0.5) * st.region_side;
    CHECK(std::hypot(dx, dy) <= 0.5);
}

TEST_CASE("more init iterations do not increase the objective") {
    const SyntheticSequence seq(scene_spec(2));
    const Image frame = seq.frame(0);
    const Box box{80.0, 64.0, 28.0, 24.0};
    auto cfg10 = small_config();
    cfg10.init_cg_iters = 10;
    auto cfg100 = small_config();
    cfg100.init_cg_iters = 100;
    const auto st10 = init_target(frame, box, cfg10);
    const auto st100 = init_target(frame, box, cfg100);
    const double e10 = objective(st10.filter, st10.memory, st10.penalty);
    const double e100 = objective(st100.filter, st100.memory, st100.penalty);
    CHECK(e100 <= e10 * (1.0 + 1e-12));
}

TEST_CASE("single-channel constant-penalty init matches the closed form") {
    const SyntheticSequence seq(scene_spec(2));
    const Image frame = seq.frame(0);
    auto cfg = small_config();
    cfg.channels = {{ChannelSpec::Kind::Gray, 1}};
    cfg.constant_penalty = true;
    cfg.beta = 1e-3;
    cfg.init_cg_iters = 800;
    const auto st = init_target(frame, Box{70.0, 60.0, 24.0, 24.0}, cfg);
    const auto closed = closed_form_filter(st.memory, cfg.beta);
    double num = 0.0, den = 0.0;
    for (int k1 = -16; k1 <= 16; ++k1)
        for (int k2 = -16; k2 <= 16; ++k2) {
            num += std::norm(st.filter.filters[0].at(k1, k2) - closed.filters[0].at(k1, k2));
            den += std::norm(closed.filters[0].at(k1, k2));
        }
    CHECK(std::sqrt(num / den) <= 1e-6);
}

TEST_CASE("static scene: negligible drift over 30 frames") {
    const SyntheticSequence seq(scene_spec(2));
    const Image frame = seq.frame(0);
    const Box box{80.0, 64.0, 28.0, 24.0};
    const auto cfg = small_config();
    auto st = init_target(frame, box, cfg);
    const double cx0 = st.cx, cy0 = st.cy, side0 = st.region_side;
    for (int t = 0; t < 30; ++t) step_target(st, frame, cfg);
    CHECK(std::hypot(st.cx - cx0, st.cy - cy0) <= 0.2);
    CHECK(std::abs(st.region_side / side0 - 1.0) <= 0.005);
}

TEST_CASE("constant translation is followed within 0.3 px") {
    auto spec = scene_spec(12);
    spec.motion.dx = 2.0;
    spec.motion.dy = 0.0;
    const SyntheticSequence seq(spec);
    const auto cfg = small_config();
    const Vec2 c0{96.0, 80.0};
    auto st = init_target(seq.frame(0), Box{c0.x - 14.0, c0.y - 12.0, 28.0, 24.0}, cfg);
    double worst = 0.0;
    for (int t = 1; t < 12; ++t) {
        step_target(st, seq.frame(t), cfg);
        const Vec2 gt = seq.warp(t, c0);
        worst = std::max(worst, std::hypot(st.cx - gt.x, st.cy - gt.y));
    }
    CHECK(worst <= 0.3);
}

TEST_CASE("zooming selects the up-scale in most frames") {
    auto spec = scene_spec(11);
    spec.motion.kind = MotionSpec::Kind::Affine;
    spec.motion.scale = 1.02;
    const SyntheticSequence seq(spec);
    const auto cfg = small_config();
    const Vec2 c0{96.0, 80.0};
    auto st = init_target(seq.frame(0), Box{c0.x - 13.0, c0.y - 13.0, 26.0, 26.0}, cfg);
    int ups = 0, frames = 0;
    for (int t = 1; t < 11; ++t) {
        const auto info = step_target(st, seq.frame(t), cfg);
        ++frames;
        if (info.scale_index >= 1) ++ups;
    }
    CHECK(ups * 10 >= frames * 8);  // >= 80%
}

TEST_CASE("warm-started CG never raises the objective") {
    auto spec = scene_spec(6);
    spec.motion.dx = 1.0;
    const SyntheticSequence seq(spec);
    const auto cfg = small_config();
    auto st = init_target(seq.frame(0), Box{82.0, 68.0, 28.0, 24.0}, cfg);
    for (int t = 1; t < 6; ++t) {
        // mirror one tracking step manually so the objective is observable
        // around the 5 warm-started iterations
        step_target(st, seq.frame(t), cfg);
        const double before = objective(st.filter, st.memory, st.penalty);
        FilterBank f = st.filter;
        train_filter_cg(f, st.memory, st.penalty, {cfg.frame_cg_iters, 0.0});
        const double after = objective(f, st.memory, st.penalty);
        CHECK(after <= before * (1.0 + 1e-12));
    }
}

TEST_CASE("degenerate boxes are rejected") {
    const SyntheticSequence seq(scene_spec(2));
    CHECK_THROWS_AS(init_target(seq.frame(0), Box{10, 10, 0.0, 5.0}, small_config()),
                    std::invalid_argument);
}

TEST_SUITE_END();
