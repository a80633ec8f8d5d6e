#include "contconv/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace contconv {

double Image::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return at(x, y);
}

double Image::bilinear(double x, double y) const {
    const double fx = std::floor(x), fy = std::floor(y);
    const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
    const double ax = x - fx, ay = y - fy;
    const double v00 = at_clamped(x0, y0), v01 = at_clamped(x0 + 1, y0);
    const double v10 = at_clamped(x0, y0 + 1), v11 = at_clamped(x0 + 1, y0 + 1);
    return (1.0 - ay) * ((1.0 - ax) * v00 + ax * v01) + ay * ((1.0 - ax) * v10 + ax * v11);
}

Image box_downsample2(const Image& img) {
    Image out(img.width / 2, img.height / 2);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y) = 0.25 * (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                                   img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1));
        }
    }
    return out;
}

namespace {

int pgm_token(std::istream& in) {
    // skips whitespace and '#' comments, then reads one unsigned decimal
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw std::runtime_error("read_pgm: malformed header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 30) throw std::runtime_error("read_pgm: header value out of range");
        c = in.get();
    }
    return static_cast<int>(v);
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw std::runtime_error("read_pgm: not a binary PGM (P5)");
    const int w = pgm_token(in);
    const int h = pgm_token(in);
    const int maxval = pgm_token(in);
    if (w < 1 || h < 1) throw std::runtime_error("read_pgm: bad dimensions");
    if (maxval < 1 || maxval > 65535) throw std::runtime_error("read_pgm: bad maxval");
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<std::uint8_t> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw std::runtime_error("read_pgm: truncated pixel data");
    Image img(w, h);
    const double scale = 1.0 / maxval;
    for (std::size_t i = 0; i < n; ++i) {
        const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
        img.px[i] = v * scale;
    }
    return img;
}

void write_pgm(const Image& img, const std::filesystem::path& path, int maxval) {
    if (maxval < 1 || maxval > 65535) throw std::invalid_argument("write_pgm: bad maxval");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<std::uint8_t> raw(img.px.size() * bytes);
    for (std::size_t i = 0; i < img.px.size(); ++i) {
        const double c = std::clamp(img.px[i], 0.0, 1.0);
        const int v = static_cast<int>(std::lround(c * maxval));
        if (bytes == 1) {
            raw[i] = static_cast<std::uint8_t>(v);
        } else {
            raw[2 * i] = static_cast<std::uint8_t>(v >> 8);
            raw[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("write_pgm: write failed");
}

std::vector<std::filesystem::path> list_pgm_frames(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> frames;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".pgm") frames.push_back(e.path());
    }
    std::sort(frames.begin(), frames.end());
    if (frames.size() < 2) throw std::runtime_error("sequence needs at least 2 frames: " + dir.string());
    return frames;
}

}  // namespace contconv
