#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "contconv/image.hpp"

namespace contconv {

/// Dense optical flow, (u, v) per pixel, row-major interleaved.
struct FlowField {
    int width = 0, height = 0;
    std::vector<float> uv;

    Vec2 at(int x, int y) const {
        const std::size_t i = 2 * (static_cast<std::size_t>(y) * width + x);
        return {uv[i], uv[i + 1]};
    }
    void set(int x, int y, Vec2 f) {
        const std::size_t i = 2 * (static_cast<std::size_t>(y) * width + x);
        uv[i] = static_cast<float>(f.x);
        uv[i + 1] = static_cast<float>(f.y);
    }
    Vec2 bilinear(double x, double y) const;
};

struct FloError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FloBadMagic : FloError {
    using FloError::FloError;
};
struct FloBadDims : FloError {
    using FloError::FloError;
};
struct FloTruncated : FloError {
    using FloError::FloError;
};

/// Middlebury .flo: float magic 202021.25, int32 width, int32 height, then
/// height*width*2 little-endian floats (u, v), row-major.
FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

}  // namespace contconv
