#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "contconv/flo.hpp"
#include "contconv/image.hpp"

using namespace contconv;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    auto dir = fs::temp_directory_path() / "contconv_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void append_f32(std::vector<std::uint8_t>& v, float f) {
    std::uint8_t b[4];
    std::memcpy(b, &f, 4);
    v.insert(v.end(), b, b + 4);
}
void append_i32(std::vector<std::uint8_t>& v, std::int32_t i) {
    std::uint8_t b[4];
    std::memcpy(b, &i, 4);
    v.insert(v.end(), b, b + 4);
}

}  // namespace

TEST_SUITE_BEGIN("image_io");

TEST_CASE("pgm round trip, 8 and 16 bit") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Image img(13, 9);
    for (auto& p : img.px) p = uni(rng);
    for (int maxval : {255, 65535}) {
        const auto path = temp_file(maxval == 255 ? "rt8.pgm" : "rt16.pgm");
        write_pgm(img, path, maxval);
        const Image back = read_pgm(path);
        REQUIRE(back.width == img.width);
        REQUIRE(back.height == img.height);
        for (std::size_t i = 0; i < img.px.size(); ++i)
            CHECK(std::abs(back.px[i] - img.px[i]) <= 0.5 / maxval + 1e-12);
    }
}

TEST_CASE("pgm header comments and whitespace") {
    const auto path = temp_file("hdr.pgm");
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment\n 3 # widths\n2\n255\n";
    const char data[6] = {0, 64, (char)128, (char)192, (char)255, (char)32};
    out.write(data, 6);
    out.close();
    const Image img = read_pgm(path);
    CHECK(img.width == 3);
    CHECK(img.height == 2);
    CHECK(std::abs(img.at(1, 0) - 64.0 / 255.0) <= 1e-12);
}

TEST_CASE("pgm errors: magic and truncation") {
    const auto bad = temp_file("bad.pgm");
    std::ofstream(bad, std::ios::binary) << "P6\n2 2\n255\n....";
    CHECK_THROWS(read_pgm(bad));
    const auto trunc = temp_file("trunc.pgm");
    std::ofstream(trunc, std::ios::binary) << "P5\n4 4\n255\nab";
    CHECK_THROWS_WITH_AS(read_pgm(trunc), doctest::Contains("truncated"), std::runtime_error);
}

TEST_CASE("flo format: hand-built file decodes bit-exactly") {
    std::vector<std::uint8_t> bytes;
    append_f32(bytes, 202021.25f);
    append_i32(bytes, 2);
    append_i32(bytes, 1);
    for (float f : {1.0f, 0.0f, 0.0f, 1.0f}) append_f32(bytes, f);
    // frozen little-endian image of the magic float
    CHECK(bytes[0] == 0x50);
    CHECK(bytes[1] == 0x49);
    CHECK(bytes[2] == 0x45);
    CHECK(bytes[3] == 0x48);
    const auto path = temp_file("tiny.flo");
    write_bytes(path, bytes);
    const FlowField f = read_flo(path);
    REQUIRE(f.width == 2);
    REQUIRE(f.height == 1);
    CHECK(f.at(0, 0).x == 1.0);
    CHECK(f.at(0, 0).y == 0.0);
    CHECK(f.at(1, 0).x == 0.0);
    CHECK(f.at(1, 0).y == 1.0);
}

TEST_CASE("flo errors are distinct") {
    std::vector<std::uint8_t> bytes;
    append_f32(bytes, 202021.26f);
    append_i32(bytes, 2);
    append_i32(bytes, 1);
    for (int i = 0; i < 4; ++i) append_f32(bytes, 0.0f);
    const auto badmagic = temp_file("badmagic.flo");
    write_bytes(badmagic, bytes);
    CHECK_THROWS_AS(read_flo(badmagic), FloBadMagic);

    bytes.clear();
    append_f32(bytes, 202021.25f);
    append_i32(bytes, -3);
    append_i32(bytes, 1);
    bytes.resize(12 + 16, 0);
    const auto baddims = temp_file("baddims.flo");
    write_bytes(baddims, bytes);
    CHECK_THROWS_AS(read_flo(baddims), FloBadDims);

    bytes.clear();
    append_f32(bytes, 202021.25f);
    append_i32(bytes, 2);
    append_i32(bytes, 2);
    append_f32(bytes, 1.0f);  // 1 of 8 floats
    const auto truncated = temp_file("short.flo");
    write_bytes(truncated, bytes);
    try {
        read_flo(truncated);
        FAIL("expected FloTruncated");
    } catch (const FloTruncated& e) {
        const std::string what = e.what();
        CHECK(what.find("32") != std::string::npos);  // expected byte count named
        CHECK(what.find("4") != std::string::npos);   // actual byte count named
    }
}

TEST_CASE("flo round trip is bit-exact") {
    std::mt19937_64 rng(62);
    std::normal_distribution<double> gauss(0.0, 3.0);
    FlowField f;
    f.width = 7;
    f.height = 5;
    f.uv.resize(70);
    for (auto& v : f.uv) v = static_cast<float>(gauss(rng));
    const auto path = temp_file("rt.flo");
    write_flo(f, path);
    const FlowField back = read_flo(path);
    REQUIRE(back.width == f.width);
    REQUIRE(back.height == f.height);
    for (std::size_t i = 0; i < f.uv.size(); ++i) CHECK(back.uv[i] == f.uv[i]);
}

TEST_CASE("flow bilinear interpolation at the cell center") {
    FlowField f;
    f.width = 2;
    f.height = 2;
    f.uv.assign(8, 0.0f);
    f.set(1, 1, {4.0, 0.0});
    const Vec2 v = f.bilinear(0.5, 0.5);
    CHECK(v.x == 1.0);
    CHECK(v.y == 0.0);
}

TEST_CASE("image bilinear replicates outside the frame") {
    Image img(3, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) img.at(x, y) = x + 10 * y;
    CHECK(img.bilinear(-5.0, 1.0) == img.at(0, 1));
    CHECK(img.bilinear(1.5, 0.0) == 1.5);
    CHECK(img.bilinear(10.0, 10.0) == img.at(2, 2));
}

TEST_CASE("box downsample averages 2x2 blocks") {
    Image img(4, 2);
    double v = 0.0;
    for (auto& p : img.px) p = v++;
    const Image half = box_downsample2(img);
    REQUIRE(half.width == 2);
    REQUIRE(half.height == 1);
    CHECK(half.at(0, 0) == (0.0 + 1.0 + 4.0 + 5.0) / 4.0);
    CHECK(half.at(1, 0) == (2.0 + 3.0 + 6.0 + 7.0) / 4.0);
}

TEST_SUITE_END();
