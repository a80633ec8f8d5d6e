#pragma once

#include <vector>

#include "contconv/fourier.hpp"

namespace contconv {

// Continuous Fourier transform of the interpolation kernel. The default is
// the centered cubic B-spline, whose transform is sinc^4(xi).
using KernelFt = double (*)(double);

double cubic_bspline_ft(double xi);

// Spatial cubic B-spline (support [-2,2], unit integral). Used by tests to
// cross-check the Fourier-domain model against direct superposition.
double cubic_bspline(double t);

/// Fourier coefficients b_N[k] of the periodized, scaled and half-sample
/// shifted kernel: b_N[k] = (1/N) exp(-i pi k / N) ft(k / N), |k| <= K.
std::vector<cplx> interp_coeffs(int N, int K, KernelFt ft = &cubic_bspline_ft);

/// Lift a discrete channel to a continuous series: coefficients
/// X[k1,k2] b_{N1}[k1] b_{N2}[k2] on the requested bandwidths.
FourierSeries2D interpolate(const DiscreteSignal2D& channel, int K1, int K2,
                            KernelFt ft = &cubic_bspline_ft);

}  // namespace contconv
