#include "contconv/point_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "contconv/localize.hpp"
#include "contconv/threads.hpp"

namespace contconv {

namespace {

// displacement folded into [-0.5, 0.5)
double wrap_half(double d) { return d - std::round(d); }

double wrap01(double t) {
    t -= std::floor(t);
    if (t >= 1.0) t = 0.0;
    return t;
}

// In continuous mode sample n of a patch sits at t = (n + 1/2)/N (the
// interpolation kernel carries a half-sample shift); MOSSE's flat model has
// no shift, so its lattice is t = n/N.
double sample_offset(const PyramidConfig& cfg) { return cfg.mosse ? 0.0 : 0.5; }

struct PatchFrame {
    int anchor_x = 0, anchor_y = 0;  // level pixel of sample (0, 0)
};

// level pixel coordinate -> patch period units
double to_patch_t(double level_px, int anchor, int window, double offs) {
    return (level_px - anchor + offs) / window;
}
double from_patch_t(double t, int anchor, int window, double offs) {
    return anchor + t * window - offs;
}

FourierSeries2D transform_patch(const DiscreteSignal2D& patch, const PyramidConfig& cfg) {
    const int K1 = patch.n1() / 2, K2 = patch.n2() / 2;
    if (cfg.mosse) {
        FourierSeries2D a = centered_spectrum(patch, K1, K2);
        a *= 1.0 / (static_cast<double>(patch.n1()) * patch.n2());
        return a;
    }
    return interpolate(patch, K1, K2);
}

double label_sigma(const PyramidConfig& cfg) { return cfg.sigma_factor / cfg.window; }

LabelSpec make_label(double u1, double u2, const PyramidConfig& cfg) {
    LabelSpec spec;
    const double sigma = label_sigma(cfg);
    if (cfg.mosse) {
        const int n = cfg.window;
        u1 = wrap01(std::round(u1 * n) / n);
        u2 = wrap01(std::round(u2 * n) / n);
    }
    spec.u1 = wrap01(u1);
    spec.u2 = wrap01(u2);
    spec.sigma1 = spec.sigma2 = sigma;
    return spec;
}

TrainingSample make_sample(FourierSeries2D a, const LabelSpec& label) {
    TrainingSample s;
    s.label = label;
    s.y1 = label_coeffs_1d(label.u1, label.sigma1, a.bandwidth1());
    s.y2 = label_coeffs_1d(label.u2, label.sigma2, a.bandwidth2());
    s.a.push_back(std::move(a));
    return s;
}

double running_median(const std::vector<double>& v) {
    std::vector<double> tmp(v);
    const std::size_t mid = tmp.size() / 2;
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
    return tmp[mid];
}

}  // namespace

void PyramidConfig::validate() const {
    if (window < 3 || window % 2 == 0) throw std::invalid_argument("PyramidConfig: window must be odd and >= 3");
    if (levels < 1) throw std::invalid_argument("PyramidConfig: levels must be >= 1");
    if (scale_step != 2.0) throw std::invalid_argument("PyramidConfig: only scale_step = 2 (box averaging) is supported");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw std::invalid_argument("PyramidConfig: learning rate must be in (0, 1]");
    if (!(beta > 0.0)) throw std::invalid_argument("PyramidConfig: beta must be positive");
}

ImagePyramid::ImagePyramid(const Image& frame, int levels) {
    levels_.reserve(static_cast<std::size_t>(levels));
    levels_.push_back(frame);
    for (int i = 1; i < levels; ++i) {
        const Image& prev = levels_.back();
        if (prev.width < 2 || prev.height < 2)
            throw std::invalid_argument("ImagePyramid: image too small for level count");
        levels_.push_back(box_downsample2(prev));
    }
}

DiscreteSignal2D extract_patch(const Image& level_image, double cx, double cy, int window) {
    const int half = window / 2;
    const int ax = static_cast<int>(std::lround(cx)) - half;
    const int ay = static_cast<int>(std::lround(cy)) - half;
    std::vector<double> v(static_cast<std::size_t>(window) * window);
    for (int i = 0; i < window; ++i)
        for (int j = 0; j < window; ++j)
            v[static_cast<std::size_t>(i) * window + j] = level_image.at_clamped(ax + j, ay + i);

    for (auto& p : v) p = std::log1p(std::max(p, 0.0));
    double mean = 0.0;
    for (double p : v) mean += p;
    mean /= static_cast<double>(v.size());
    double energy = 0.0;
    for (auto& p : v) {
        p -= mean;
        energy += p * p;
    }
    if (energy < 1e-12) {
        std::fill(v.begin(), v.end(), 0.0);
    } else {
        const double inv = 1.0 / std::sqrt(energy);
        for (auto& p : v) p *= inv;
    }
    // Hann taper sampled at the (n + 1/2)/N lattice
    std::vector<double> hann(static_cast<std::size_t>(window));
    for (int n = 0; n < window; ++n)
        hann[static_cast<std::size_t>(n)] =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 0.5) / window);
    for (int i = 0; i < window; ++i)
        for (int j = 0; j < window; ++j)
            v[static_cast<std::size_t>(i) * window + j] *= hann[static_cast<std::size_t>(i)] * hann[static_cast<std::size_t>(j)];
    return DiscreteSignal2D(window, window, std::move(v));
}

PointState init_point(const ImagePyramid& pyr, Vec2 pos, const PyramidConfig& cfg) {
    PointState st;
    st.pos = pos;
    st.levels.reserve(static_cast<std::size_t>(cfg.levels));
    const double offs = sample_offset(cfg);
    double scale = 1.0;
    for (int l = 0; l < cfg.levels; ++l) {
        const Image& im = pyr.level(l);
        const double cx = pos.x / scale, cy = pos.y / scale;
        const int half = cfg.window / 2;
        const int ax = static_cast<int>(std::lround(cx)) - half;
        const int ay = static_cast<int>(std::lround(cy)) - half;
        auto patch = extract_patch(im, cx, cy, cfg.window);
        auto a = transform_patch(patch, cfg);
        const auto label = make_label(to_patch_t(cy, ay, cfg.window, offs),
                                      to_patch_t(cx, ax, cfg.window, offs), cfg);
        SampleMemory mem(cfg.memory_capacity, cfg.learning_rate);
        mem.update(make_sample(std::move(a), label));
        FilterBank filt = closed_form_filter(mem, cfg.beta);
        st.levels.push_back({std::move(mem), std::move(filt)});
        scale *= cfg.scale_step;
    }
    return st;
}

void track_point(PointState& state, const ImagePyramid& pyr, const PyramidConfig& cfg) {
    if (state.lost) return;
    const double offs = sample_offset(cfg);
    const int window = cfg.window;

    struct LevelObs {
        FourierSeries2D a;
        PatchFrame frame;
        double scale;
    };
    std::vector<LevelObs> obs(static_cast<std::size_t>(cfg.levels));

    Vec2 pos = state.pos;
    double finest_score = 0.0;
    for (int l = cfg.levels - 1; l >= 0; --l) {
        const double scale = std::pow(cfg.scale_step, l);
        const Image& im = pyr.level(l);
        const double cx = pos.x / scale, cy = pos.y / scale;
        const int half = window / 2;
        PatchFrame pf;
        pf.anchor_x = static_cast<int>(std::lround(cx)) - half;
        pf.anchor_y = static_cast<int>(std::lround(cy)) - half;
        auto patch = extract_patch(im, cx, cy, window);
        auto a = transform_patch(patch, cfg);
        const FourierSeries2D score = convolve(state.levels[static_cast<std::size_t>(l)].filter.filters[0], a);

        double t1, t2, peak;
        if (cfg.mosse) {
            const auto g = grid_search(score);
            t1 = static_cast<double>(g.n1) / score.rows();
            t2 = static_cast<double>(g.n2) / score.cols();
            peak = g.value;
        } else {
            const auto loc = localize_peak(score, cfg.newton_iters);
            t1 = loc.t1;
            t2 = loc.t2;
            peak = loc.score;
        }
        const double pred1 = to_patch_t(cy, pf.anchor_y, window, offs);
        const double pred2 = to_patch_t(cx, pf.anchor_x, window, offs);
        pos.y += wrap_half(t1 - pred1) * window * scale;
        pos.x += wrap_half(t2 - pred2) * window * scale;
        if (l == 0) finest_score = peak;
        obs[static_cast<std::size_t>(l)] = {std::move(a), pf, scale};
    }

    if (!std::isfinite(pos.x) || !std::isfinite(pos.y) || !pyr.level(0).contains(pos.x, pos.y)) {
        state.lost = true;
        return;
    }
    if (state.peak_history.size() >= 5 &&
        finest_score < cfg.loss_ratio * running_median(state.peak_history)) {
        state.lost = true;
        return;
    }
    state.peak_history.push_back(finest_score);
    if (state.peak_history.size() > static_cast<std::size_t>(cfg.score_history))
        state.peak_history.erase(state.peak_history.begin());
    state.pos = pos;

    for (int l = 0; l < cfg.levels; ++l) {
        auto& ob = obs[static_cast<std::size_t>(l)];
        auto& lvl = state.levels[static_cast<std::size_t>(l)];
        const double u1 = to_patch_t(pos.y / ob.scale, ob.frame.anchor_y, window, offs);
        const double u2 = to_patch_t(pos.x / ob.scale, ob.frame.anchor_x, window, offs);
        lvl.memory.update(make_sample(std::move(ob.a), make_label(u1, u2, cfg)));
        lvl.filter = closed_form_filter(lvl.memory, cfg.beta);
    }
}

std::vector<Vec2> select_points(const Image& img, int max_points, double min_distance) {
    const int w = img.width, h = img.height;
    if (w < 3 || h < 3 || max_points < 1) return {};
    std::vector<double> response(static_cast<std::size_t>(w) * h, 0.0);
    // structure tensor over a 3x3 neighborhood, central-difference gradients
    std::vector<double> gx(response.size()), gy(response.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            gx[static_cast<std::size_t>(y) * w + x] = 0.5 * (img.at_clamped(x + 1, y) - img.at_clamped(x - 1, y));
            gy[static_cast<std::size_t>(y) * w + x] = 0.5 * (img.at_clamped(x, y + 1) - img.at_clamped(x, y - 1));
        }
    }
    double max_resp = 0.0;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            double a = 0.0, b = 0.0, c = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const std::size_t i = static_cast<std::size_t>(y + dy) * w + (x + dx);
                    a += gx[i] * gx[i];
                    b += gx[i] * gy[i];
                    c += gy[i] * gy[i];
                }
            }
            const double half_tr = 0.5 * (a + c);
            const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
            const double lmin = half_tr - disc;
            response[static_cast<std::size_t>(y) * w + x] = lmin;
            max_resp = std::max(max_resp, lmin);
        }
    }
    if (max_resp < 1e-12) return {};
    struct Cand {
        double r;
        int x, y;
    };
    std::vector<Cand> cands;
    const double floor_resp = std::max(1e-12, 0.01 * max_resp);
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x)
            if (const double r = response[static_cast<std::size_t>(y) * w + x]; r >= floor_resp)
                cands.push_back({r, x, y});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.r != b.r) return a.r > b.r;
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    std::vector<Vec2> out;
    const double d2 = min_distance * min_distance;
    for (const auto& c : cands) {
        bool ok = true;
        for (const auto& p : out) {
            const double ddx = p.x - c.x, ddy = p.y - c.y;
            if (ddx * ddx + ddy * ddy < d2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        out.push_back({static_cast<double>(c.x), static_cast<double>(c.y)});
        if (static_cast<int>(out.size()) >= max_points) break;
    }
    return out;
}

void PointTrackerSet::init(const Image& frame, const std::vector<Vec2>& seeds) {
    const ImagePyramid pyr(frame, cfg_.levels);
    states_.clear();
    states_.reserve(seeds.size());
    for (const auto& s : seeds) states_.push_back(init_point(pyr, s, cfg_));
}

void PointTrackerSet::track(const Image& frame) {
    const ImagePyramid pyr(frame, cfg_.levels);
    parallel_for(states_.size(), [&](std::size_t i) { track_point(states_[i], pyr, cfg_); });
}

}  // namespace contconv
