#include "contconv/labels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contconv {

std::vector<cplx> label_coeffs_1d(double u, double sigma, int K) {
    if (sigma <= 0.0) throw std::invalid_argument("label_coeffs: sigma must be positive");
    if (sigma < min_label_sigma(K))
        throw std::invalid_argument("label_coeffs: sigma below aliasing limit 0.5/(2K+1)");
    const double pi = std::numbers::pi;
    const double amp = std::sqrt(2.0 * pi * sigma * sigma);
    std::vector<cplx> y(2 * static_cast<std::size_t>(K) + 1);
    for (int k = -K; k <= K; ++k) {
        const double mag = amp * std::exp(-2.0 * sigma * sigma * (pi * k) * (pi * k));
        y[static_cast<std::size_t>(k + K)] = std::polar(mag, -2.0 * pi * u * k);
    }
    return y;
}

FourierSeries2D label_coeffs(const LabelSpec& spec, int K1, int K2) {
    const auto y1 = label_coeffs_1d(spec.u1, spec.sigma1, K1);
    const auto y2 = label_coeffs_1d(spec.u2, spec.sigma2, K2);
    FourierSeries2D out(K1, K2);
    for (int k1 = -K1; k1 <= K1; ++k1)
        for (int k2 = -K2; k2 <= K2; ++k2)
            out.at(k1, k2) = y1[static_cast<std::size_t>(k1 + K1)] * y2[static_cast<std::size_t>(k2 + K2)];
    return out;
}

std::vector<cplx> periodic_repetition_coeffs(const std::function<cplx(double)>& ft, int K) {
    std::vector<cplx> c(2 * static_cast<std::size_t>(K) + 1);
    for (int k = -K; k <= K; ++k) c[static_cast<std::size_t>(k + K)] = ft(static_cast<double>(k));
    return c;
}

}  // namespace contconv
