#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contconv/flo.hpp"
#include "contconv/image.hpp"

namespace contconv {

/// One trajectory: position per frame while the point is alive.
struct Track {
    std::vector<std::optional<Vec2>> pos;

    std::size_t length() const {
        std::size_t n = 0;
        for (const auto& p : pos)
            if (p) ++n;
        return n;
    }
};

struct ScoreParams {
    double inlier_threshold = 3.0;  // px
    int curve_samples = 64;         // thresholds i * 4/64 px, i = 0..63
    double curve_max = 4.0;
    int hist_bins = 64;  // uniform on [0, curve_max) plus an overflow bin
};

struct TrackReport {
    std::size_t num_points = 0;
    std::size_t num_frames = 0;
    std::size_t epe_samples = 0;
    std::size_t inlier_count = 0;
    double inlier_ratio = 0.0;
    double mean_inlier_epe = 0.0;
    double mean_epe = 0.0;
    std::vector<double> thresholds;
    std::vector<double> precision;
    std::vector<double> hist_edges;        // bins + 1 edges
    std::vector<std::size_t> hist_counts;  // bins entries
    std::size_t hist_overflow = 0;

    struct PerPoint {
        int id = 0;
        std::size_t frames_tracked = 0;
        std::size_t frames_compared = 0;
        double mean_epe = 0.0;
        double final_epe = 0.0;
    };
    std::vector<PerPoint> per_point;
};

/// EPE statistics of predicted tracks against ground truth, pooled over all
/// (point, frame) pairs where both are alive.
TrackReport score_tracks(const std::vector<Track>& pred, const std::vector<Track>& gt,
                         const ScoreParams& params = {});

/// Forward-integrate seeds through per-frame flow fields (bilinear lookup).
/// A track ends when it leaves the frame or, if occlusion masks are given
/// (value > 0.5 = occluded), at the first frame whose nearest mask pixel is
/// set. Output tracks span flows.size() + 1 frames.
std::vector<Track> integrate_gt_tracks(std::span<const FlowField> flows,
                                       std::span<const Image> occlusion_masks,
                                       const std::vector<Vec2>& seeds);

/// Same stepping and termination rules with a flow callback (frame index,
/// position) -> flow; frame_count positions per track, flow queried for
/// frames 0 .. frame_count-2 on the width x height domain.
std::vector<Track> integrate_gt_tracks(const std::function<Vec2(int, Vec2)>& flow,
                                       int frame_count, int width, int height,
                                       std::span<const Image> occlusion_masks,
                                       const std::vector<Vec2>& seeds);

// machine-readable output
std::string report_to_json(const TrackReport& report, const std::string& config_echo_json);
std::string precision_curve_csv(const TrackReport& report);
std::string epe_histogram_csv(const TrackReport& report);
std::string tracks_to_json(const std::vector<Track>& tracks);
std::vector<Track> tracks_from_json(const std::string& text);

}  // namespace contconv
