#include "contconv/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dft_tables.hpp"

namespace contconv {

namespace {

// per-k phase vectors and the three k2-weighted row reductions used by both
// the value and the derivatives of s at a point
struct PointEval {
    double s;
    double g1, g2;
    double h11, h12, h22;
};

PointEval eval_with_derivatives(const FourierSeries2D& c, double t1, double t2) {
    const int K1 = c.bandwidth1(), K2 = c.bandwidth2();
    const int cols = 2 * K2 + 1;
    const double w = 2.0 * std::numbers::pi;
    std::vector<cplx> v2(static_cast<std::size_t>(cols));
    {
        const cplx step = std::polar(1.0, w * t2);
        cplx p = std::polar(1.0, -w * K2 * t2);
        for (int k = -K2; k <= K2; ++k) {
            v2[static_cast<std::size_t>(k + K2)] = p;
            p *= step;
        }
    }
    cplx S0{0, 0}, S1{0, 0}, S2{0, 0}, S11{0, 0}, S12{0, 0}, S22{0, 0};
    const cplx step1 = std::polar(1.0, w * t1);
    cplx p1 = std::polar(1.0, -w * K1 * t1);
    for (int k1 = -K1; k1 <= K1; ++k1) {
        const cplx* row = c.coeffs().data() + static_cast<std::size_t>(k1 + K1) * cols;
        cplx r0{0, 0}, r1{0, 0}, r2{0, 0};
        for (int j = 0; j < cols; ++j) {
            const cplx cv = row[j] * v2[static_cast<std::size_t>(j)];
            const double k2 = static_cast<double>(j - K2);
            r0 += cv;
            r1 += k2 * cv;
            r2 += (k2 * k2) * cv;
        }
        const cplx e = p1;
        const double k1d = static_cast<double>(k1);
        S0 += e * r0;
        S1 += k1d * (e * r0);
        S2 += e * r1;
        S11 += (k1d * k1d) * (e * r0);
        S12 += k1d * (e * r1);
        S22 += e * r2;
        p1 *= step1;
    }
    PointEval out;
    out.s = S0.real();
    // d/dt factors: i 2 pi k
    out.g1 = -w * S1.imag();
    out.g2 = -w * S2.imag();
    out.h11 = -w * w * S11.real();
    out.h12 = -w * w * S12.real();
    out.h22 = -w * w * S22.real();
    return out;
}

double wrap01(double t) {
    t -= std::floor(t);
    if (t >= 1.0) t = 0.0;
    return t;
}

}  // namespace

std::vector<double> grid_values(const FourierSeries2D& s) {
    const int K1 = s.bandwidth1(), K2 = s.bandwidth2();
    const int M1 = 2 * K1 + 1, M2 = 2 * K2 + 1;
    const auto e1 = detail::grid_tables(K1);
    const auto e2 = detail::grid_tables(K2);
    // B[k1][m2] = sum_k2 c[k1][k2] phase2[m2][k2]
    std::vector<cplx> B(static_cast<std::size_t>(M1) * M2);
    for (int i = 0; i < M1; ++i) {
        const cplx* row = s.coeffs().data() + static_cast<std::size_t>(i) * M2;
        for (int m2 = 0; m2 < M2; ++m2) {
            const cplx* ph = e2->phase.data() + static_cast<std::size_t>(m2) * M2;
            cplx acc{0, 0};
            for (int j = 0; j < M2; ++j) acc += row[j] * ph[j];
            B[static_cast<std::size_t>(i) * M2 + m2] = acc;
        }
    }
    std::vector<cplx> S(static_cast<std::size_t>(M1) * M2, cplx{0, 0});
    for (int m1 = 0; m1 < M1; ++m1) {
        const cplx* ph = e1->phase.data() + static_cast<std::size_t>(m1) * M1;
        cplx* out = S.data() + static_cast<std::size_t>(m1) * M2;
        for (int i = 0; i < M1; ++i) {
            const cplx w = ph[i];
            const cplx* Bi = B.data() + static_cast<std::size_t>(i) * M2;
            for (int m2 = 0; m2 < M2; ++m2) out[m2] += w * Bi[m2];
        }
    }
    double max_im = 0.0, max_re = 0.0;
    std::vector<double> vals(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        vals[i] = S[i].real();
        max_im = std::max(max_im, std::abs(S[i].imag()));
        max_re = std::max(max_re, std::abs(S[i].real()));
    }
    if (max_im > 1e-8 * (1.0 + max_re))
        throw std::invalid_argument("grid_values: series is not Hermitian (complex scores)");
    return vals;
}

GridPeak grid_search(const FourierSeries2D& s) {
    const auto vals = grid_values(s);
    const int M2 = 2 * s.bandwidth2() + 1;
    GridPeak peak;
    peak.value = vals[0];
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > peak.value) {
            peak.value = vals[i];
            peak.n1 = static_cast<int>(i) / M2;
            peak.n2 = static_cast<int>(i) % M2;
        }
    }
    return peak;
}

LocalizationResult newton_refine(const FourierSeries2D& s, double t01, double t02, int max_iters) {
    const int K = std::max(s.bandwidth1(), s.bandwidth2());
    const double max_step = 1.5 / (2.0 * K + 1.0);  // at most 1.5 grid cells per iterate
    double t1 = wrap01(t01), t2 = wrap01(t02);
    double cur = eval_with_derivatives(s, t1, t2).s;
    double best1 = t1, best2 = t2, best_score = cur;
    LocalizationResult res;
    res.converged = false;
    for (int it = 0; it < max_iters; ++it) {
        const auto e = eval_with_derivatives(s, t1, t2);
        cur = e.s;
        if (cur > best_score) {
            best_score = cur;
            best1 = t1;
            best2 = t2;
        }
        const double gn = std::hypot(e.g1, e.g2);
        // Ascent needs a negative definite Hessian; when an iterate sits on a
        // shoulder or saddle, shift the spectrum down (modified Newton) so the
        // step stays an ascent direction.
        const double half_tr = 0.5 * (e.h11 + e.h22);
        const double disc = std::sqrt(std::max(0.0, 0.25 * (e.h11 - e.h22) * (e.h11 - e.h22) +
                                                        e.h12 * e.h12));
        const double lmax = half_tr + disc;
        const double scale = std::abs(e.h11) + std::abs(e.h22) + 2.0 * std::abs(e.h12);
        double h11 = e.h11, h22 = e.h22;
        if (lmax > -1e-12 * scale) {
            const double shift = lmax + std::max(0.05 * scale, 1e-12 * scale + 1e-300);
            h11 -= shift;
            h22 -= shift;
        }
        const double det = h11 * h22 - e.h12 * e.h12;
        if (!(det > 0.0) || gn < 1e-15) {
            res.converged = true;  // flat to machine precision
            break;
        }
        double d1 = -(h22 * e.g1 - e.h12 * e.g2) / det;
        double d2 = -(-e.h12 * e.g1 + h11 * e.g2) / det;
        double dn = std::hypot(d1, d2);
        if (dn > max_step) {
            d1 *= max_step / dn;
            d2 *= max_step / dn;
            dn = max_step;
        }
        // backtrack on overshoot
        double n1 = wrap01(t1 + d1), n2 = wrap01(t2 + d2);
        double val = eval_with_derivatives(s, n1, n2).s;
        for (int bt = 0; bt < 6 && val < cur; ++bt) {
            d1 *= 0.5;
            d2 *= 0.5;
            dn *= 0.5;
            n1 = wrap01(t1 + d1);
            n2 = wrap01(t2 + d2);
            val = eval_with_derivatives(s, n1, n2).s;
        }
        res.newton_iters_used = it + 1;
        t1 = n1;
        t2 = n2;
        cur = val;
        if (cur > best_score) {
            best_score = cur;
            best1 = t1;
            best2 = t2;
        }
        if (dn < 1e-9) {
            res.converged = true;
            break;
        }
    }
    res.t1 = best1;
    res.t2 = best2;
    res.score = best_score;
    return res;
}

LocalizationResult localize_peak(const FourierSeries2D& s, int newton_iters) {
    const auto peak = grid_search(s);
    const double t1 = static_cast<double>(peak.n1) / (2 * s.bandwidth1() + 1);
    const double t2 = static_cast<double>(peak.n2) / (2 * s.bandwidth2() + 1);
    return newton_refine(s, t1, t2, newton_iters);
}

}  // namespace contconv
