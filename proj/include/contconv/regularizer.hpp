#pragma once

#include <vector>

#include "contconv/fourier.hpp"

namespace contconv {

/// Spatial penalty on the filter energy. Either a constant w(t) = beta
/// (point tracking) or, per dimension, a raised cosine
/// w_i(t) = mu_i - eta_i cos(2 pi (t - c_i)) combined additively:
/// w(t1, t2) = w_1(t1) + w_2(t2). Both are exactly band-limited.
struct PenaltySpec {
    enum class Kind { Constant, RaisedCosine };

    Kind kind = Kind::Constant;
    double beta = 1e-4;
    double mu1 = 0.0, eta1 = 0.0, c1 = 0.5;
    double mu2 = 0.0, eta2 = 0.0, c2 = 0.5;

    static PenaltySpec constant(double beta);
    static PenaltySpec raised_cosine(double mu, double eta, double center);
    static PenaltySpec raised_cosine(double mu1, double eta1, double c1,
                                     double mu2, double eta2, double c2);

    int bandwidth() const { return kind == Kind::Constant ? 0 : 1; }  // L per dimension
};

/// Per-dimension coefficients of the penalty (dim is 1 or 2).
/// Constant: single coefficient beta. Raised cosine: w[0] = mu,
/// w[+-1] = -(eta/2) e^{-+ i 2 pi c}.
FourierSeries1D penalty_coeffs(const PenaltySpec& spec, int dim);

/// The 2-D penalty function's nonzero Fourier coefficients as a sparse tap
/// list; the constant case is a single tap, the additive raised cosine a
/// 5-point cross.
struct PenaltyStencil {
    struct Tap {
        int k1, k2;
        cplx w;
    };
    std::vector<Tap> taps;
    int L = 0;  // per-dimension bandwidth of the 2-D penalty
};
PenaltyStencil penalty_stencil(const PenaltySpec& spec);

// Coefficient-domain convolution with the stencil: bandwidth K -> K+L.
FourierSeries2D stencil_convolve(const PenaltyStencil& st, const FourierSeries2D& f);
// Adjoint of stencil_convolve: bandwidth K+L -> K.
FourierSeries2D stencil_correlate(const PenaltyStencil& st, const FourierSeries2D& g, int K1, int K2);

/// w evaluated at a point (for tests and positivity checks).
double penalty_value(const PenaltySpec& spec, double t1, double t2);

}  // namespace contconv
