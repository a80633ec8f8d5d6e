#pragma once

#include <vector>

#include "contconv/image.hpp"
#include "contconv/learner.hpp"

namespace contconv {

struct PyramidConfig {
    int levels = 3;
    int window = 31;           // patch side, odd
    double scale_step = 2.0;   // per-level downscale (2x2 box averaging)
    double learning_rate = 0.1;
    double beta = 1e-4;
    double sigma_factor = 1.5;       // label sigma = sigma_factor / window
    std::size_t memory_capacity = 30;
    int newton_iters = 5;
    bool mosse = false;        // flat interpolation, grid labels, grid-only localization
    double loss_ratio = 0.15;  // lost when the peak drops below ratio x running median
    int score_history = 64;

    void validate() const;
};

/// Per-level image stack; level i is the source box-downsampled i times.
class ImagePyramid {
public:
    ImagePyramid(const Image& frame, int levels);
    const Image& level(int i) const { return levels_[static_cast<std::size_t>(i)]; }
    int levels() const { return static_cast<int>(levels_.size()); }

private:
    std::vector<Image> levels_;
};

struct PointState {
    Vec2 pos;
    bool lost = false;
    struct Level {
        SampleMemory memory;
        FilterBank filter;
    };
    std::vector<Level> levels;
    std::vector<double> peak_history;  // recent finest-level peak scores
};

/// Window around round(center) in a pyramid level, replicate-padded and
/// preprocessed (log, zero mean, unit energy, Hann).
DiscreteSignal2D extract_patch(const Image& level_image, double cx, double cy, int window);

PointState init_point(const ImagePyramid& pyr, Vec2 pos, const PyramidConfig& cfg);

/// One tracking step: coarse-to-fine localization, loss check, then memory
/// update and closed-form refit per level.
void track_point(PointState& state, const ImagePyramid& pyr, const PyramidConfig& cfg);

/// Shi-Tomasi corner selection with greedy non-max suppression; candidates
/// are at least min_distance apart, strongest first.
std::vector<Vec2> select_points(const Image& img, int max_points, double min_distance);

/// Convenience driver for a set of points sharing frames; tracking across
/// points runs under the thread budget.
class PointTrackerSet {
public:
    explicit PointTrackerSet(PyramidConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

    void init(const Image& frame, const std::vector<Vec2>& seeds);
    void track(const Image& frame);

    const std::vector<PointState>& states() const { return states_; }
    const PyramidConfig& config() const { return cfg_; }

private:
    PyramidConfig cfg_;
    std::vector<PointState> states_;
};

}  // namespace contconv
