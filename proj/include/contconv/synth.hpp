#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "contconv/flo.hpp"
#include "contconv/image.hpp"

namespace contconv {

struct MotionSpec {
    enum class Kind { Translation, Sinusoid, Affine };
    Kind kind = Kind::Translation;
    double dx = 0.0, dy = 0.0;  // linear drift, px/frame (all kinds)
    // sinusoid: offset amp * (sin(2 pi t / period + phase) - sin(phase))
    double amp_x = 0.0, amp_y = 0.0;
    double period = 40.0, phase = 0.0;
    // affine: per-frame rotation/scale about the image center
    double rot_deg = 0.0, scale = 1.0;
};

struct TextureSpec {
    enum class Kind { Bandlimited, Checker, Blobs };
    Kind kind = Kind::Bandlimited;
    int waves = 48;
    double min_freq = 0.02, max_freq = 0.25;  // cycles/px
    double checker_period = 16.0;
    int blob_count = 80;
    double blob_sigma = 3.0;
    std::uint64_t seed = 1;
};

struct SynthSpec {
    int width = 256, height = 256, frames = 20;
    MotionSpec motion;
    TextureSpec texture;
    double snr_db = std::numeric_limits<double>::infinity();  // inf = noise free
    std::uint64_t noise_seed = 7;
};

/// Analytic image sequence: frames render a fixed continuous texture under
/// an exact warp, so ground truth has no resampling error.
class SyntheticSequence {
public:
    explicit SyntheticSequence(SynthSpec spec);

    const SynthSpec& spec() const { return spec_; }
    int frames() const { return spec_.frames; }

    Image frame(int t) const;

    /// Ground-truth position at frame t of a point seeded at frame 0.
    Vec2 warp(int t, Vec2 p0) const;

    /// Analytic flow from frame t to t+1, evaluated at p in frame-t coords.
    Vec2 flow(int t, Vec2 p) const;

    /// flow(t, .) sampled on the pixel grid.
    FlowField flow_field(int t) const;

private:
    Vec2 forward(int t, Vec2 p0) const;
    Vec2 inverse(int t, Vec2 p) const;
    double texture_at(double x, double y) const;

    SynthSpec spec_;
    struct Wave {
        double fx, fy, amp, phase;
    };
    std::vector<Wave> waves_;
    struct Blob {
        double x, y, amp;
    };
    std::vector<Blob> blobs_;
    double noise_sigma_ = 0.0;
};

std::vector<std::vector<Vec2>> ground_truth_tracks(const SyntheticSequence& seq,
                                                   const std::vector<Vec2>& seeds);

}  // namespace contconv
