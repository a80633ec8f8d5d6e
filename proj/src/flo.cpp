#include "contconv/flo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace contconv {

namespace {
constexpr float kFloMagic = 202021.25f;
}

Vec2 FlowField::bilinear(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height - 1));
    const int x0 = std::min(static_cast<int>(std::floor(x)), width - 2 >= 0 ? width - 2 : 0);
    const int y0 = std::min(static_cast<int>(std::floor(y)), height - 2 >= 0 ? height - 2 : 0);
    const int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
    const double ax = x - x0, ay = y - y0;
    const Vec2 v00 = at(x0, y0), v01 = at(x1, y0), v10 = at(x0, y1), v11 = at(x1, y1);
    return {(1 - ay) * ((1 - ax) * v00.x + ax * v01.x) + ay * ((1 - ax) * v10.x + ax * v11.x),
            (1 - ay) * ((1 - ax) * v00.y + ax * v01.y) + ay * ((1 - ax) * v10.y + ax * v11.y)};
}

FlowField read_flo(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FloError("read_flo: cannot open " + path.string());
    float magic = 0.0f;
    std::int32_t w = 0, h = 0;
    in.read(reinterpret_cast<char*>(&magic), 4);
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    if (in.gcount() != 4 || !in)
        throw FloTruncated("read_flo: header truncated in " + path.string());
    if (magic != kFloMagic)
        throw FloBadMagic("read_flo: bad magic number in " + path.string());
    if (w <= 0 || h <= 0)
        throw FloBadDims("read_flo: nonpositive dimensions in " + path.string());
    FlowField f;
    f.width = w;
    f.height = h;
    const std::size_t n = 2 * static_cast<std::size_t>(w) * h;
    f.uv.resize(n);
    in.read(reinterpret_cast<char*>(f.uv.data()), static_cast<std::streamsize>(n * 4));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got != n * 4)
        throw FloTruncated("read_flo: expected " + std::to_string(n * 4) + " data bytes, got " +
                           std::to_string(got) + " in " + path.string());
    return f;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FloError("write_flo: cannot open " + path.string());
    const float magic = kFloMagic;
    const std::int32_t w = flow.width, h = flow.height;
    out.write(reinterpret_cast<const char*>(&magic), 4);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(flow.uv.data()),
              static_cast<std::streamsize>(flow.uv.size() * 4));
    if (!out) throw FloError("write_flo: write failed for " + path.string());
}

}  // namespace contconv
