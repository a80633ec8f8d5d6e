#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "contconv/labels.hpp"
#include "oracles.hpp"

using namespace contconv;

TEST_SUITE_BEGIN("labels");

TEST_CASE("coefficient formula at k = 0") {
    const auto y = label_coeffs_1d(0.0, 0.1, 4);
    CHECK(std::abs(y[4] - cplx{std::sqrt(2.0 * std::numbers::pi) * 0.1, 0.0}) <= 1e-12);
    CHECK(std::abs(y[4].real() - 0.2506628) <= 1e-7);
}

TEST_CASE("coefficient formula with an off-center peak") {
    const auto y = label_coeffs_1d(0.5, 0.1, 4);
    const double pi = std::numbers::pi;
    // sqrt(2 pi) 0.1 e^{-0.02 pi^2} e^{-i pi}
    const double expect = -std::sqrt(2.0 * pi) * 0.1 * std::exp(-0.02 * pi * pi);
    CHECK(std::abs(y[5] - cplx{expect, 0.0}) <= 1e-12);
    CHECK(y[5].real() < -0.2);
    CHECK(y[5].real() > -0.21);
}

TEST_CASE("2-D labels are separable and conjugate-symmetric") {
    LabelSpec spec{0.3, 0.7, 0.08, 0.06};
    const auto y = label_coeffs(spec, 5, 4);
    const auto y1 = label_coeffs_1d(0.3, 0.08, 5);
    const auto y2 = label_coeffs_1d(0.7, 0.06, 4);
    for (int k1 = -5; k1 <= 5; ++k1)
        for (int k2 = -4; k2 <= 4; ++k2) {
            CHECK(std::abs(y.at(k1, k2) - y1[static_cast<std::size_t>(k1 + 5)] *
                                              y2[static_cast<std::size_t>(k2 + 4)]) <= 1e-15);
            CHECK(std::abs(y.at(-k1, -k2) - std::conj(y.at(k1, k2))) <= 1e-15);
        }
}

TEST_CASE("the periodized Gaussian peaks at its center") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int K = 8;
    LabelSpec spec{0.37, 0.62, 1.1 / (2 * K + 1), 1.1 / (2 * K + 1)};
    const auto y = label_coeffs(spec, K, K);
    const double peak = evaluate(y, spec.u1, spec.u2).real();
    for (int i = 0; i < 100; ++i) {
        const double v = evaluate(y, uni(rng), uni(rng)).real();
        CHECK(v <= peak + 1e-12);
    }
}

TEST_CASE("periodic repetition of a flat transform is a Dirac comb") {
    const auto c = periodic_repetition_coeffs([](double) { return cplx{1.0, 0.0}; }, 5);
    for (const auto& v : c) CHECK(v == cplx{1.0, 0.0});
}

TEST_CASE("periodic repetition of the Gaussian transform reproduces the label formula") {
    const double sigma = 0.07;
    const auto via_rep = periodic_repetition_coeffs(
        [sigma](double xi) {
            return cplx{std::sqrt(2.0 * std::numbers::pi * sigma * sigma) *
                            std::exp(-2.0 * sigma * sigma * (std::numbers::pi * xi) *
                                     (std::numbers::pi * xi)),
                        0.0};
        },
        6);
    const auto via_label = label_coeffs_1d(0.0, sigma, 6);
    for (std::size_t i = 0; i < via_rep.size(); ++i)
        CHECK(std::abs(via_rep[i] - via_label[i]) <= 1e-15);
}

TEST_CASE("periodic repetition of a scaled triangle matches sampled periodization") {
    // kernel tri(N t), transform (1/N) sinc^2(xi/N); checked against an
    // M-point sampling of the spatial periodization
    const int N = 8, K = 6, M = 16384;
    auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x); };
    const auto coeffs = periodic_repetition_coeffs(
        [&](double xi) { return cplx{sinc(xi / N) * sinc(xi / N) / N, 0.0}; }, K);
    auto tri = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
    for (int k : {-N / 2, N / 2, 1, 3}) {
        cplx sampled{0.0, 0.0};
        for (int j = 0; j < M; ++j) {
            const double t = static_cast<double>(j) / M;
            double g = 0.0;
            for (int m = -1; m <= 1; ++m) g += tri(N * (t - m));
            sampled += g * std::polar(1.0, -2.0 * std::numbers::pi * k * t);
        }
        sampled /= static_cast<double>(M);
        const cplx got = coeffs[static_cast<std::size_t>(k + K)];
        CHECK(std::abs(got - sampled) <= 1e-6 * std::abs(sampled));
    }
}

TEST_CASE("moving the center multiplies coefficients by a pure phase") {
    const double u = 0.21, delta = 0.345, sigma = 0.09;
    const auto y0 = label_coeffs_1d(u, sigma, 7);
    const auto y1 = label_coeffs_1d(u + delta, sigma, 7);
    for (int k = -7; k <= 7; ++k) {
        const cplx phase = std::polar(1.0, -2.0 * std::numbers::pi * k * delta);
        CHECK(std::abs(y1[static_cast<std::size_t>(k + 7)] -
                       y0[static_cast<std::size_t>(k + 7)] * phase) <= 1e-12);
    }
}

TEST_CASE("label evaluation on a grid is real") {
    LabelSpec spec{0.123, 0.881, 0.05, 0.07};
    const auto y = label_coeffs(spec, 9, 9);
    for (int i = 0; i < 19; ++i)
        for (int j = 0; j < 19; ++j)
            CHECK(std::abs(evaluate(y, i / 19.0, j / 19.0).imag()) <= 1e-10);
}

TEST_CASE("small sigma gives a sharp peak") {
    const int K = 16;
    const double sigma = 0.05;
    LabelSpec spec{0.5, 0.5, sigma, sigma};
    const auto y = label_coeffs(spec, K, K);
    const double peak = evaluate(y, 0.5, 0.5).real();
    const double off = evaluate(y, 0.5 + 3.0 * sigma, 0.5).real();
    CHECK(off < 0.02 * peak);
}

TEST_CASE("aliasing guard rejects undersampled sigmas") {
    CHECK_THROWS_AS((void)label_coeffs_1d(0.0, 0.4 / 17.0, 8), std::invalid_argument);
    CHECK_THROWS_AS((void)label_coeffs_1d(0.0, -0.1, 8), std::invalid_argument);
    CHECK_NOTHROW((void)label_coeffs_1d(0.0, 0.6 / 17.0, 8));
}

TEST_SUITE_END();
