#include "contconv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace contconv {

TrackReport score_tracks(const std::vector<Track>& pred, const std::vector<Track>& gt,
                         const ScoreParams& params) {
    if (pred.size() != gt.size())
        throw std::invalid_argument("score_tracks: track count mismatch");
    TrackReport rep;
    rep.num_points = pred.size();
    std::vector<double> epes;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        rep.num_frames = std::max({rep.num_frames, pred[i].pos.size(), gt[i].pos.size()});
        TrackReport::PerPoint pp;
        pp.id = static_cast<int>(i);
        pp.frames_tracked = pred[i].length();
        double sum = 0.0;
        const std::size_t frames = std::min(pred[i].pos.size(), gt[i].pos.size());
        for (std::size_t t = 0; t < frames; ++t) {
            if (!pred[i].pos[t] || !gt[i].pos[t]) continue;
            const double dx = pred[i].pos[t]->x - gt[i].pos[t]->x;
            const double dy = pred[i].pos[t]->y - gt[i].pos[t]->y;
            const double epe = std::hypot(dx, dy);
            epes.push_back(epe);
            sum += epe;
            ++pp.frames_compared;
            pp.final_epe = epe;
        }
        pp.mean_epe = pp.frames_compared ? sum / static_cast<double>(pp.frames_compared) : 0.0;
        rep.per_point.push_back(pp);
    }
    rep.epe_samples = epes.size();

    double inlier_sum = 0.0, total_sum = 0.0;
    for (double e : epes) {
        total_sum += e;
        if (e < params.inlier_threshold) {
            ++rep.inlier_count;
            inlier_sum += e;
        }
    }
    if (!epes.empty()) {
        rep.inlier_ratio = static_cast<double>(rep.inlier_count) / static_cast<double>(epes.size());
        rep.mean_epe = total_sum / static_cast<double>(epes.size());
    }
    if (rep.inlier_count) rep.mean_inlier_epe = inlier_sum / static_cast<double>(rep.inlier_count);

    rep.thresholds.resize(static_cast<std::size_t>(params.curve_samples));
    rep.precision.resize(static_cast<std::size_t>(params.curve_samples));
    for (int i = 0; i < params.curve_samples; ++i) {
        const double th = params.curve_max * i / params.curve_samples;
        rep.thresholds[static_cast<std::size_t>(i)] = th;
        if (!epes.empty()) {
            std::size_t below = 0;
            for (double e : epes)
                if (e < th) ++below;
            rep.precision[static_cast<std::size_t>(i)] =
                static_cast<double>(below) / static_cast<double>(epes.size());
        }
    }

    rep.hist_edges.resize(static_cast<std::size_t>(params.hist_bins) + 1);
    rep.hist_counts.assign(static_cast<std::size_t>(params.hist_bins), 0);
    const double bin_w = params.curve_max / params.hist_bins;
    for (int i = 0; i <= params.hist_bins; ++i)
        rep.hist_edges[static_cast<std::size_t>(i)] = bin_w * i;
    for (double e : epes) {
        const int b = static_cast<int>(e / bin_w);
        if (b >= params.hist_bins)
            ++rep.hist_overflow;
        else
            ++rep.hist_counts[static_cast<std::size_t>(b)];
    }
    return rep;
}

std::vector<Track> integrate_gt_tracks(const std::function<Vec2(int, Vec2)>& flow,
                                       int frame_count, int width, int height,
                                       std::span<const Image> occlusion_masks,
                                       const std::vector<Vec2>& seeds) {
    std::vector<Track> tracks(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        auto& tr = tracks[i];
        tr.pos.assign(static_cast<std::size_t>(frame_count), std::nullopt);
        Vec2 p = seeds[i];
        for (int t = 0; t < frame_count; ++t) {
            if (width > 0 && (p.x < 0.0 || p.y < 0.0 || p.x > width - 1.0 || p.y > height - 1.0))
                break;
            if (static_cast<std::size_t>(t) < occlusion_masks.size()) {
                const auto& m = occlusion_masks[static_cast<std::size_t>(t)];
                const int mx = std::clamp(static_cast<int>(std::lround(p.x)), 0, m.width - 1);
                const int my = std::clamp(static_cast<int>(std::lround(p.y)), 0, m.height - 1);
                if (m.at(mx, my) > 0.5) break;
            }
            tr.pos[static_cast<std::size_t>(t)] = p;
            if (t + 1 < frame_count) {
                const Vec2 f = flow(t, p);
                p = {p.x + f.x, p.y + f.y};
            }
        }
    }
    return tracks;
}

std::vector<Track> integrate_gt_tracks(std::span<const FlowField> flows,
                                       std::span<const Image> occlusion_masks,
                                       const std::vector<Vec2>& seeds) {
    const int w = flows.empty() ? 0 : flows.front().width;
    const int h = flows.empty() ? 0 : flows.front().height;
    return integrate_gt_tracks(
        [&flows](int t, Vec2 p) { return flows[static_cast<std::size_t>(t)].bilinear(p.x, p.y); },
        static_cast<int>(flows.size()) + 1, w, h, occlusion_masks, seeds);
}

namespace {
using ordered_json = nlohmann::ordered_json;

ordered_json report_json_obj(const TrackReport& r) {
    ordered_json j;
    j["num_points"] = r.num_points;
    j["num_frames"] = r.num_frames;
    j["epe_samples"] = r.epe_samples;
    j["inlier_count"] = r.inlier_count;
    j["inlier_ratio"] = r.inlier_ratio;
    j["mean_inlier_epe"] = r.mean_inlier_epe;
    j["mean_epe"] = r.mean_epe;
    j["precision_curve"] = ordered_json::array();
    for (std::size_t i = 0; i < r.thresholds.size(); ++i)
        j["precision_curve"].push_back({{"threshold", r.thresholds[i]}, {"precision", r.precision[i]}});
    j["epe_histogram"] = ordered_json::array();
    for (std::size_t i = 0; i < r.hist_counts.size(); ++i)
        j["epe_histogram"].push_back({{"bin_left", r.hist_edges[i]},
                                      {"bin_right", r.hist_edges[i + 1]},
                                      {"count", r.hist_counts[i]}});
    j["epe_histogram_overflow"] = r.hist_overflow;
    j["per_point"] = ordered_json::array();
    for (const auto& p : r.per_point)
        j["per_point"].push_back({{"id", p.id},
                                  {"frames_tracked", p.frames_tracked},
                                  {"frames_compared", p.frames_compared},
                                  {"mean_epe", p.mean_epe},
                                  {"final_epe", p.final_epe}});
    return j;
}
}  // namespace

std::string report_to_json(const TrackReport& report, const std::string& config_echo_json) {
    ordered_json j;
    j["config"] = config_echo_json.empty() ? ordered_json::object()
                                           : ordered_json::parse(config_echo_json);
    j["metrics"] = report_json_obj(report);
    return j.dump(2) + "\n";
}

std::string precision_curve_csv(const TrackReport& r) {
    std::ostringstream out;
    out << "threshold,precision\n";
    for (std::size_t i = 0; i < r.thresholds.size(); ++i)
        out << r.thresholds[i] << "," << r.precision[i] << "\n";
    return out.str();
}

std::string epe_histogram_csv(const TrackReport& r) {
    std::ostringstream out;
    out << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < r.hist_counts.size(); ++i)
        out << r.hist_edges[i] << "," << r.hist_edges[i + 1] << "," << r.hist_counts[i] << "\n";
    out << r.hist_edges.back() << ",inf," << r.hist_overflow << "\n";
    return out.str();
}

std::string tracks_to_json(const std::vector<Track>& tracks) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tracks) {
        ordered_json jt = ordered_json::array();
        for (const auto& p : t.pos) {
            if (p)
                jt.push_back({p->x, p->y});
            else
                jt.push_back(nullptr);
        }
        arr.push_back(std::move(jt));
    }
    ordered_json j;
    j["tracks"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::vector<Track> tracks_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("tracks")) throw std::invalid_argument("tracks_from_json: missing 'tracks'");
    std::vector<Track> tracks;
    for (const auto& jt : j["tracks"]) {
        Track t;
        for (const auto& p : jt) {
            if (p.is_null())
                t.pos.push_back(std::nullopt);
            else
                t.pos.push_back(Vec2{p[0].get<double>(), p[1].get<double>()});
        }
        tracks.push_back(std::move(t));
    }
    return tracks;
}

}  // namespace contconv
