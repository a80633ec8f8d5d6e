#pragma once

#include <functional>
#include <vector>

#include "contconv/fourier.hpp"

namespace contconv {

/// Desired confidence: a periodized Gaussian with sub-pixel center (u1, u2)
/// and per-dimension width sigma, all in period units.
struct LabelSpec {
    double u1 = 0.0, u2 = 0.0;
    double sigma1 = 0.05, sigma2 = 0.05;
};

// Smallest sigma the truncated series can represent without noticeable
// aliasing; label_coeffs rejects anything below.
inline double min_label_sigma(int K) { return 0.5 / (2 * K + 1); }

/// One-dimensional factor of the label coefficients:
/// y[k] = sqrt(2 pi sigma^2) exp(-2 sigma^2 (pi k)^2 - i 2 pi u k).
std::vector<cplx> label_coeffs_1d(double u, double sigma, int K);

/// Separable 2-D label series on bandwidths (K1, K2).
FourierSeries2D label_coeffs(const LabelSpec& spec, int K1, int K2);

/// Fourier coefficients of the 1-periodic repetition of a function with
/// continuous transform ft: coefficient k equals ft(k) (T = 1).
std::vector<cplx> periodic_repetition_coeffs(const std::function<cplx(double)>& ft, int K);

}  // namespace contconv
