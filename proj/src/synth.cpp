#include "contconv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "contconv/threads.hpp"

namespace contconv {

namespace {
constexpr double kTexStd = 0.13;  // texture std around 0.5 keeps clipping rare
}

SyntheticSequence::SyntheticSequence(SynthSpec spec) : spec_(spec) {
    if (spec_.width < 8 || spec_.height < 8 || spec_.frames < 1)
        throw std::invalid_argument("SyntheticSequence: bad geometry");
    std::mt19937_64 rng(spec_.texture.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    if (spec_.texture.kind == TextureSpec::Kind::Bandlimited) {
        const int n = std::max(1, spec_.texture.waves);
        waves_.reserve(static_cast<std::size_t>(n));
        double power = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ang = 2.0 * std::numbers::pi * uni(rng);
            const double f = spec_.texture.min_freq +
                             (spec_.texture.max_freq - spec_.texture.min_freq) * uni(rng);
            const double amp = 0.5 + 0.5 * uni(rng);
            waves_.push_back({f * std::cos(ang), f * std::sin(ang), amp,
                              2.0 * std::numbers::pi * uni(rng)});
            power += 0.5 * amp * amp;
        }
        const double scale = kTexStd / std::sqrt(power);
        for (auto& w : waves_) w.amp *= scale;
    } else if (spec_.texture.kind == TextureSpec::Kind::Blobs) {
        blobs_.reserve(static_cast<std::size_t>(spec_.texture.blob_count));
        for (int i = 0; i < spec_.texture.blob_count; ++i) {
            blobs_.push_back({uni(rng) * spec_.width, uni(rng) * spec_.height,
                              (uni(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 0.2 * uni(rng))});
        }
    }
    if (std::isfinite(spec_.snr_db)) {
        double tex_std = kTexStd;
        if (spec_.texture.kind == TextureSpec::Kind::Checker) tex_std = 0.25;
        if (spec_.texture.kind == TextureSpec::Kind::Blobs) {
            double s2 = 0.0;
            const int probes = 4096;
            std::mt19937_64 prng(spec_.texture.seed ^ 0x9e3779b97f4a7c15ull);
            std::uniform_real_distribution<double> pu(0.0, 1.0);
            double mean = 0.0;
            std::vector<double> vals(probes);
            for (int i = 0; i < probes; ++i) {
                vals[static_cast<std::size_t>(i)] =
                    texture_at(pu(prng) * spec_.width, pu(prng) * spec_.height);
                mean += vals[static_cast<std::size_t>(i)];
            }
            mean /= probes;
            for (double v : vals) s2 += (v - mean) * (v - mean);
            tex_std = std::sqrt(s2 / probes);
        }
        noise_sigma_ = tex_std / std::pow(10.0, spec_.snr_db / 20.0);
    }
}

double SyntheticSequence::texture_at(double x, double y) const {
    switch (spec_.texture.kind) {
        case TextureSpec::Kind::Bandlimited: {
            double v = 0.5;
            for (const auto& w : waves_)
                v += w.amp * std::cos(2.0 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
            return v;
        }
        case TextureSpec::Kind::Checker: {
            const double p = spec_.texture.checker_period;
            const double s = std::sin(2.0 * std::numbers::pi * x / p) *
                             std::sin(2.0 * std::numbers::pi * y / p);
            return s >= 0.0 ? 0.75 : 0.25;
        }
        case TextureSpec::Kind::Blobs: {
            double v = 0.5;
            const double s2 = 2.0 * spec_.texture.blob_sigma * spec_.texture.blob_sigma;
            for (const auto& b : blobs_) {
                const double r2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
                if (r2 < 25.0 * s2) v += b.amp * std::exp(-r2 / s2);
            }
            return v;
        }
    }
    return 0.5;
}

Vec2 SyntheticSequence::forward(int t, Vec2 p0) const {
    const auto& m = spec_.motion;
    Vec2 p = p0;
    if (m.kind == MotionSpec::Kind::Affine) {
        const double cx = 0.5 * spec_.width, cy = 0.5 * spec_.height;
        const double ang = t * m.rot_deg * std::numbers::pi / 180.0;
        const double s = std::pow(m.scale, t);
        const double ca = std::cos(ang) * s, sa = std::sin(ang) * s;
        const double rx = p0.x - cx, ry = p0.y - cy;
        p = {cx + ca * rx - sa * ry, cy + sa * rx + ca * ry};
    } else if (m.kind == MotionSpec::Kind::Sinusoid) {
        const double ph = 2.0 * std::numbers::pi * t / m.period + m.phase;
        const double base = std::sin(m.phase);
        p.x += m.amp_x * (std::sin(ph) - base);
        p.y += m.amp_y * (std::sin(ph) - base);
    }
    p.x += t * m.dx;
    p.y += t * m.dy;
    return p;
}

Vec2 SyntheticSequence::inverse(int t, Vec2 p) const {
    const auto& m = spec_.motion;
    Vec2 q = {p.x - t * m.dx, p.y - t * m.dy};
    if (m.kind == MotionSpec::Kind::Affine) {
        const double cx = 0.5 * spec_.width, cy = 0.5 * spec_.height;
        const double ang = -t * m.rot_deg * std::numbers::pi / 180.0;
        const double s = std::pow(m.scale, -t);
        const double ca = std::cos(ang) * s, sa = std::sin(ang) * s;
        const double rx = q.x - cx, ry = q.y - cy;
        q = {cx + ca * rx - sa * ry, cy + sa * rx + ca * ry};
    } else if (m.kind == MotionSpec::Kind::Sinusoid) {
        const double ph = 2.0 * std::numbers::pi * t / m.period + m.phase;
        const double base = std::sin(m.phase);
        q.x -= m.amp_x * (std::sin(ph) - base);
        q.y -= m.amp_y * (std::sin(ph) - base);
    }
    return q;
}

Vec2 SyntheticSequence::warp(int t, Vec2 p0) const { return forward(t, p0); }

Vec2 SyntheticSequence::flow(int t, Vec2 p) const {
    const Vec2 p0 = inverse(t, p);
    const Vec2 p1 = forward(t + 1, p0);
    return {p1.x - p.x, p1.y - p.y};
}

Image SyntheticSequence::frame(int t) const {
    Image img(spec_.width, spec_.height);
    parallel_for(static_cast<std::size_t>(spec_.height), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        std::mt19937_64 rng(spec_.noise_seed + 0x1000003ull * static_cast<std::uint64_t>(t) +
                            static_cast<std::uint64_t>(y));
        std::normal_distribution<double> gauss(0.0, noise_sigma_);
        for (int x = 0; x < spec_.width; ++x) {
            const Vec2 p0 = inverse(t, {static_cast<double>(x), static_cast<double>(y)});
            double v = texture_at(p0.x, p0.y);
            if (noise_sigma_ > 0.0) v += gauss(rng);
            img.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    });
    return img;
}

FlowField SyntheticSequence::flow_field(int t) const {
    FlowField f;
    f.width = spec_.width;
    f.height = spec_.height;
    f.uv.resize(2 * static_cast<std::size_t>(f.width) * f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x)
            f.set(x, y, flow(t, {static_cast<double>(x), static_cast<double>(y)}));
    return f;
}

std::vector<std::vector<Vec2>> ground_truth_tracks(const SyntheticSequence& seq,
                                                   const std::vector<Vec2>& seeds) {
    std::vector<std::vector<Vec2>> tracks(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        tracks[i].reserve(static_cast<std::size_t>(seq.frames()));
        for (int t = 0; t < seq.frames(); ++t) tracks[i].push_back(seq.warp(t, seeds[i]));
    }
    return tracks;
}

}  // namespace contconv
