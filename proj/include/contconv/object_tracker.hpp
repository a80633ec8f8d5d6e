#pragma once

#include <vector>

#include "contconv/image.hpp"
#include "contconv/learner.hpp"

namespace contconv {

struct Box {
    double x = 0, y = 0, w = 0, h = 0;  // top-left + size, pixels
};

/// Handcrafted multi-resolution feature recipe; `decimation` divides the
/// base patch resolution.
struct ChannelSpec {
    enum class Kind { Gray, GradMag };
    Kind kind = Kind::Gray;
    int decimation = 1;
};

struct ObjectConfig {
    int base_resolution = 48;
    std::vector<ChannelSpec> channels = {{ChannelSpec::Kind::Gray, 1},
                                         {ChannelSpec::Kind::Gray, 2},
                                         {ChannelSpec::Kind::GradMag, 4}};
    double region_area_scale = 5.0;  // region side = scale * sqrt(target area)
    double sigma_ratio = 1.0 / 16.0; // label sigma = ratio * target/region per dim
    double learning_rate = 0.0075;
    std::size_t memory_capacity = 400;
    int init_cg_iters = 100;
    int frame_cg_iters = 5;
    int num_scales = 5;
    double scale_step = 1.02;
    int newton_iters = 5;
    bool constant_penalty = false;      // w(t) = beta instead of the raised cosine
    double beta = 1e-3;
    double penalty_min = 1e-3;          // w at the target center
    double penalty_edge_ratio = 0.01;   // w(center) / w(edge)

    void validate() const;
};

struct TargetState {
    double cx = 0, cy = 0;   // target center, pixels
    double w = 0, h = 0;     // current target size
    double region_side = 0;  // current sample region side
    FilterBank filter;
    SampleMemory memory{400, 0.0075};
    PenaltySpec penalty;
    LabelSpec label;  // center fixed at (0.5, 0.5)
};

struct StepInfo {
    double score = 0.0;
    int scale_index = 0;  // chosen scale relative to the middle (e.g. -2..2)
    Vec2 center{};
};

/// Channels sampled from the square region (side pixels) around (cx, cy);
/// out-of-frame samples replicate the border.
FeatureMap extract_object_features(const Image& img, double cx, double cy, double side,
                                   const ObjectConfig& cfg);

TargetState init_target(const Image& img, const Box& box, const ObjectConfig& cfg);

StepInfo step_target(TargetState& st, const Image& img, const ObjectConfig& cfg);

}  // namespace contconv
