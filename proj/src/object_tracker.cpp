#include "contconv/object_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "contconv/localize.hpp"

namespace contconv {

namespace {

double wrap_half(double d) { return d - std::round(d); }

std::vector<double> hann_window(int n) {
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        h[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 0.5) / n);
    return h;
}

// bilinear resample of the region onto an R x R grid; sample n sits at
// center + (n + 1/2 - R/2) * side / R
std::vector<double> sample_region(const Image& img, double cx, double cy, double side, int R) {
    std::vector<double> g(static_cast<std::size_t>(R) * R);
    const double step = side / R;
    for (int i = 0; i < R; ++i) {
        const double y = cy + (i + 0.5 - 0.5 * R) * step;
        for (int j = 0; j < R; ++j) {
            const double x = cx + (j + 0.5 - 0.5 * R) * step;
            g[static_cast<std::size_t>(i) * R + j] = img.bilinear(x, y);
        }
    }
    return g;
}

std::vector<double> box_decimate(const std::vector<double>& g, int R, int dec) {
    const int r = R / dec;
    std::vector<double> out(static_cast<std::size_t>(r) * r, 0.0);
    const double inv = 1.0 / (dec * dec);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j)
            out[static_cast<std::size_t>(i / dec) * r + (j / dec)] += g[static_cast<std::size_t>(i) * R + j] * inv;
    return out;
}

DiscreteSignal2D finish_channel(std::vector<double> v, int n) {
    double mean = 0.0;
    for (double p : v) mean += p;
    mean /= static_cast<double>(v.size());
    const auto hann = hann_window(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            v[static_cast<std::size_t>(i) * n + j] =
                (v[static_cast<std::size_t>(i) * n + j] - mean) * hann[static_cast<std::size_t>(i)] * hann[static_cast<std::size_t>(j)];
    return DiscreteSignal2D(n, n, std::move(v));
}

}  // namespace

void ObjectConfig::validate() const {
    if (base_resolution < 8) throw std::invalid_argument("ObjectConfig: base resolution too small");
    if (channels.empty()) throw std::invalid_argument("ObjectConfig: need at least one channel");
    for (const auto& c : channels) {
        if (c.decimation < 1 || base_resolution % c.decimation != 0)
            throw std::invalid_argument("ObjectConfig: channel decimation must divide the base resolution");
    }
    if (num_scales < 1 || num_scales % 2 == 0)
        throw std::invalid_argument("ObjectConfig: num_scales must be odd");
    if (!(scale_step > 1.0)) throw std::invalid_argument("ObjectConfig: scale_step must exceed 1");
    if (!(penalty_edge_ratio > 0.0 && penalty_edge_ratio < 1.0))
        throw std::invalid_argument("ObjectConfig: penalty_edge_ratio must be in (0,1)");
}

FeatureMap extract_object_features(const Image& img, double cx, double cy, double side,
                                   const ObjectConfig& cfg) {
    const int R = cfg.base_resolution;
    const auto base = sample_region(img, cx, cy, side, R);
    FeatureMap fm;
    fm.channels.reserve(cfg.channels.size());
    std::vector<double> gradmag;
    for (const auto& spec : cfg.channels) {
        const int n = R / spec.decimation;
        if (spec.kind == ChannelSpec::Kind::Gray) {
            fm.channels.push_back(finish_channel(
                spec.decimation == 1 ? base : box_decimate(base, R, spec.decimation), n));
        } else {
            if (gradmag.empty()) {
                gradmag.resize(base.size());
                auto at = [&](int i, int j) {
                    i = std::clamp(i, 0, R - 1);
                    j = std::clamp(j, 0, R - 1);
                    return base[static_cast<std::size_t>(i) * R + j];
                };
                for (int i = 0; i < R; ++i)
                    for (int j = 0; j < R; ++j)
                        gradmag[static_cast<std::size_t>(i) * R + j] =
                            std::hypot(0.5 * (at(i, j + 1) - at(i, j - 1)),
                                       0.5 * (at(i + 1, j) - at(i - 1, j)));
            }
            fm.channels.push_back(finish_channel(
                spec.decimation == 1 ? gradmag : box_decimate(gradmag, R, spec.decimation), n));
        }
    }
    return fm;
}

TargetState init_target(const Image& img, const Box& box, const ObjectConfig& cfg) {
    cfg.validate();
    if (!(box.w > 0.0 && box.h > 0.0)) throw std::invalid_argument("init_target: degenerate box");
    TargetState st;
    st.cx = box.x + 0.5 * box.w;
    st.cy = box.y + 0.5 * box.h;
    st.w = box.w;
    st.h = box.h;
    st.region_side = cfg.region_area_scale * std::sqrt(box.w * box.h);

    const int K = cfg.base_resolution / 2;
    const double smin = min_label_sigma(K);
    st.label.u1 = st.label.u2 = 0.5;
    st.label.sigma1 = std::max(cfg.sigma_ratio * (st.h / st.region_side), smin);
    st.label.sigma2 = std::max(cfg.sigma_ratio * (st.w / st.region_side), smin);

    if (cfg.constant_penalty) {
        st.penalty = PenaltySpec::constant(cfg.beta);
    } else {
        // additive raised cosine: min 2(mu-eta) at the center, max 2(mu+eta)
        const double lo = 0.5 * cfg.penalty_min;
        const double hi = 0.5 * cfg.penalty_min / cfg.penalty_edge_ratio;
        st.penalty = PenaltySpec::raised_cosine(0.5 * (hi + lo), 0.5 * (hi - lo), 0.5);
    }

    st.memory = SampleMemory(cfg.memory_capacity, cfg.learning_rate);
    st.memory.update(transform_sample(extract_object_features(img, st.cx, st.cy, st.region_side, cfg),
                                      st.label));
    st.filter = zero_filter(st.memory.samples().front());
    train_filter_cg(st.filter, st.memory, st.penalty, {cfg.init_cg_iters, 0.0});
    return st;
}

StepInfo step_target(TargetState& st, const Image& img, const ObjectConfig& cfg) {
    const int mid = cfg.num_scales / 2;
    StepInfo best;
    best.score = -std::numeric_limits<double>::infinity();
    double best_side = st.region_side;
    double best_factor = 1.0;
    LocalizationResult best_loc;
    for (int si = 0; si < cfg.num_scales; ++si) {
        const double factor = std::pow(cfg.scale_step, si - mid);
        const double side = st.region_side * factor;
        const auto fm = extract_object_features(img, st.cx, st.cy, side, cfg);
        const auto s = apply_operator(st.filter, fm);
        const auto loc = localize_peak(s, cfg.newton_iters);
        if (loc.score > best.score) {
            best.score = loc.score;
            best.scale_index = si - mid;
            best_side = side;
            best_factor = factor;
            best_loc = loc;
        }
    }
    st.cx += wrap_half(best_loc.t2 - 0.5) * best_side;
    st.cy += wrap_half(best_loc.t1 - 0.5) * best_side;
    st.cx = std::clamp(st.cx, 0.0, static_cast<double>(img.width - 1));
    st.cy = std::clamp(st.cy, 0.0, static_cast<double>(img.height - 1));
    st.region_side = best_side;
    st.w *= best_factor;
    st.h *= best_factor;

    st.memory.update(transform_sample(
        extract_object_features(img, st.cx, st.cy, st.region_side, cfg), st.label));
    train_filter_cg(st.filter, st.memory, st.penalty, {cfg.frame_cg_iters, 0.0});

    best.center = {st.cx, st.cy};
    return best;
}

}  // namespace contconv
