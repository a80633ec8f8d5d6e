#include "contconv/interp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contconv {

double cubic_bspline_ft(double xi) {
    if (xi == 0.0) return 1.0;
    const double s = std::sin(std::numbers::pi * xi) / (std::numbers::pi * xi);
    const double s2 = s * s;
    return s2 * s2;
}

double cubic_bspline(double t) {
    const double a = std::abs(t);
    if (a >= 2.0) return 0.0;
    if (a >= 1.0) {
        const double u = 2.0 - a;
        return u * u * u / 6.0;
    }
    return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
}

std::vector<cplx> interp_coeffs(int N, int K, KernelFt ft) {
    if (N < 1) throw std::invalid_argument("interp_coeffs: N must be >= 1");
    if (K < 0) throw std::invalid_argument("interp_coeffs: K must be >= 0");
    std::vector<cplx> b(2 * static_cast<std::size_t>(K) + 1);
    for (int k = -K; k <= K; ++k) {
        const double mag = ft(static_cast<double>(k) / N) / N;
        b[static_cast<std::size_t>(k + K)] = std::polar(mag, -std::numbers::pi * k / N);
    }
    return b;
}

FourierSeries2D interpolate(const DiscreteSignal2D& channel, int K1, int K2, KernelFt ft) {
    const auto b1 = interp_coeffs(channel.n1(), K1, ft);
    const auto b2 = interp_coeffs(channel.n2(), K2, ft);
    const auto& X = channel.dft();
    const int n1 = channel.n1(), n2 = channel.n2();
    FourierSeries2D out(K1, K2);
    for (int k1 = -K1; k1 <= K1; ++k1) {
        const int i1 = ((k1 % n1) + n1) % n1;
        const cplx w1 = b1[static_cast<std::size_t>(k1 + K1)];
        for (int k2 = -K2; k2 <= K2; ++k2) {
            const int i2 = ((k2 % n2) + n2) % n2;
            out.at(k1, k2) = X[static_cast<std::size_t>(i1) * n2 + i2] * w1 * b2[static_cast<std::size_t>(k2 + K2)];
        }
    }
    return out;
}

}  // namespace contconv
