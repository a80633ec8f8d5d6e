#include "contconv/regularizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contconv {

PenaltySpec PenaltySpec::constant(double beta) {
    if (beta <= 0.0) throw std::invalid_argument("PenaltySpec: beta must be positive");
    PenaltySpec s;
    s.kind = Kind::Constant;
    s.beta = beta;
    return s;
}

PenaltySpec PenaltySpec::raised_cosine(double mu, double eta, double center) {
    return raised_cosine(mu, eta, center, mu, eta, center);
}

PenaltySpec PenaltySpec::raised_cosine(double mu1, double eta1, double c1,
                                       double mu2, double eta2, double c2) {
    if (eta1 < 0.0 || eta2 < 0.0 || mu1 <= eta1 || mu2 <= eta2)
        throw std::invalid_argument("PenaltySpec: need mu > eta >= 0 for positivity");
    PenaltySpec s;
    s.kind = Kind::RaisedCosine;
    s.mu1 = mu1; s.eta1 = eta1; s.c1 = c1;
    s.mu2 = mu2; s.eta2 = eta2; s.c2 = c2;
    return s;
}

FourierSeries1D penalty_coeffs(const PenaltySpec& spec, int dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("penalty_coeffs: dim must be 1 or 2");
    if (spec.kind == PenaltySpec::Kind::Constant) {
        FourierSeries1D w(0);
        w.at(0) = spec.beta;
        return w;
    }
    const double mu = dim == 1 ? spec.mu1 : spec.mu2;
    const double eta = dim == 1 ? spec.eta1 : spec.eta2;
    const double c = dim == 1 ? spec.c1 : spec.c2;
    FourierSeries1D w(1);
    w.at(0) = mu;
    // -eta cos(2 pi (t-c)) = -(eta/2) [e^{i2pi(t-c)} + e^{-i2pi(t-c)}]
    w.at(1) = -0.5 * eta * std::polar(1.0, -2.0 * std::numbers::pi * c);
    w.at(-1) = -0.5 * eta * std::polar(1.0, 2.0 * std::numbers::pi * c);
    return w;
}

PenaltyStencil penalty_stencil(const PenaltySpec& spec) {
    PenaltyStencil st;
    if (spec.kind == PenaltySpec::Kind::Constant) {
        st.L = 0;
        st.taps.push_back({0, 0, cplx{spec.beta, 0.0}});
        return st;
    }
    const auto w1 = penalty_coeffs(spec, 1);
    const auto w2 = penalty_coeffs(spec, 2);
    st.L = 1;
    st.taps.push_back({0, 0, w1.at(0) + w2.at(0)});
    st.taps.push_back({1, 0, w1.at(1)});
    st.taps.push_back({-1, 0, w1.at(-1)});
    st.taps.push_back({0, 1, w2.at(1)});
    st.taps.push_back({0, -1, w2.at(-1)});
    return st;
}

FourierSeries2D stencil_convolve(const PenaltyStencil& st, const FourierSeries2D& f) {
    const int K1 = f.bandwidth1(), K2 = f.bandwidth2();
    FourierSeries2D out(K1 + st.L, K2 + st.L);
    for (const auto& tap : st.taps) {
        for (int k1 = -K1; k1 <= K1; ++k1)
            for (int k2 = -K2; k2 <= K2; ++k2)
                out.at(k1 + tap.k1, k2 + tap.k2) += tap.w * f.at(k1, k2);
    }
    return out;
}

FourierSeries2D stencil_correlate(const PenaltyStencil& st, const FourierSeries2D& g, int K1, int K2) {
    FourierSeries2D out(K1, K2);
    for (const auto& tap : st.taps) {
        const cplx w = std::conj(tap.w);
        for (int k1 = -K1; k1 <= K1; ++k1)
            for (int k2 = -K2; k2 <= K2; ++k2)
                out.at(k1, k2) += w * g.coeff_or_zero(k1 + tap.k1, k2 + tap.k2);
    }
    return out;
}

double penalty_value(const PenaltySpec& spec, double t1, double t2) {
    if (spec.kind == PenaltySpec::Kind::Constant) return spec.beta;
    const double pi2 = 2.0 * std::numbers::pi;
    return spec.mu1 - spec.eta1 * std::cos(pi2 * (t1 - spec.c1)) +
           spec.mu2 - spec.eta2 * std::cos(pi2 * (t2 - spec.c2));
}

}  // namespace contconv
