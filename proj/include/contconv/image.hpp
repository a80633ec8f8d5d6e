#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace contconv {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

/// Grayscale image, row-major, values nominally in [0, 1].
struct Image {
    int width = 0, height = 0;
    std::vector<double> px;

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return px[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return px[static_cast<std::size_t>(y) * width + x]; }

    double at_clamped(int x, int y) const;
    double bilinear(double x, double y) const;  // replicate outside the frame

    bool contains(double x, double y) const {
        return x >= 0.0 && y >= 0.0 && x <= width - 1.0 && y <= height - 1.0;
    }
};

/// One 2x2 box-average octave (dimensions halve, floor).
Image box_downsample2(const Image& img);

/// Binary PGM (P5), 8- or 16-bit (16-bit samples big-endian). Values are
/// normalized to [0,1] on read and quantized against maxval on write.
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const Image& img, const std::filesystem::path& path, int maxval = 65535);

/// Frames of a sequence: the .pgm files in a directory, sorted by name.
std::vector<std::filesystem::path> list_pgm_frames(const std::filesystem::path& dir);

}  // namespace contconv
