#include "contconv/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dft_tables.hpp"

namespace contconv {

namespace detail {

namespace {
std::mutex g_tables_mutex;
std::map<int, std::shared_ptr<const DftTables>> g_dft_tables;
std::map<int, std::shared_ptr<const GridTables>> g_grid_tables;
}  // namespace

std::shared_ptr<const DftTables> dft_tables(int n) {
    std::lock_guard lock(g_tables_mutex);
    auto& slot = g_dft_tables[n];
    if (!slot) {
        auto t = std::make_shared<DftTables>();
        t->n = n;
        t->fwd.resize(static_cast<std::size_t>(n) * n);
        const double step = 2.0 * std::numbers::pi / n;
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                const long long m = (static_cast<long long>(k) * j) % n;
                t->fwd[static_cast<std::size_t>(k) * n + j] = std::polar(1.0, -step * static_cast<double>(m));
            }
        }
        slot = std::move(t);
    }
    return slot;
}

std::shared_ptr<const GridTables> grid_tables(int K) {
    std::lock_guard lock(g_tables_mutex);
    auto& slot = g_grid_tables[K];
    if (!slot) {
        const int M = 2 * K + 1;
        auto t = std::make_shared<GridTables>();
        t->K = K;
        t->phase.resize(static_cast<std::size_t>(M) * M);
        const double step = 2.0 * std::numbers::pi / M;
        for (int m = 0; m < M; ++m) {
            for (int k = -K; k <= K; ++k) {
                long long r = (static_cast<long long>(k) * m) % M;
                if (r < 0) r += M;
                t->phase[static_cast<std::size_t>(m) * M + (k + K)] = std::polar(1.0, step * static_cast<double>(r));
            }
        }
        slot = std::move(t);
    }
    return slot;
}

}  // namespace detail

namespace {

// X = F1 . x . F2^T with unnormalized forward twiddles.
std::vector<cplx> dft2_impl(int n1, int n2, std::span<const double> x) {
    const auto t1 = detail::dft_tables(n1);
    const auto t2 = detail::dft_tables(n2);
    std::vector<cplx> tmp(static_cast<std::size_t>(n1) * n2, cplx{0.0, 0.0});
    for (int k1 = 0; k1 < n1; ++k1) {
        cplx* row = tmp.data() + static_cast<std::size_t>(k1) * n2;
        const cplx* w = t1->fwd.data() + static_cast<std::size_t>(k1) * n1;
        for (int j1 = 0; j1 < n1; ++j1) {
            const double wr = w[j1].real(), wi = w[j1].imag();
            const double* xr = x.data() + static_cast<std::size_t>(j1) * n2;
            for (int j2 = 0; j2 < n2; ++j2) {
                row[j2] += cplx{wr * xr[j2], wi * xr[j2]};
            }
        }
    }
    std::vector<cplx> X(static_cast<std::size_t>(n1) * n2);
    for (int k1 = 0; k1 < n1; ++k1) {
        const cplx* trow = tmp.data() + static_cast<std::size_t>(k1) * n2;
        for (int k2 = 0; k2 < n2; ++k2) {
            const cplx* w = t2->fwd.data() + static_cast<std::size_t>(k2) * n2;
            cplx acc{0.0, 0.0};
            for (int j2 = 0; j2 < n2; ++j2) acc += trow[j2] * w[j2];
            X[static_cast<std::size_t>(k1) * n2 + k2] = acc;
        }
    }
    return X;
}

}  // namespace

const std::vector<cplx>& DiscreteSignal2D::dft() const {
    std::call_once(cache_->once, [this] { cache_->X = dft2_impl(n1_, n2_, s_); });
    return cache_->X;
}

cplx DiscreteSignal2D::dft_at(long long k1, long long k2) const {
    const auto& X = dft();
    const long long i1 = ((k1 % n1_) + n1_) % n1_;
    const long long i2 = ((k2 % n2_) + n2_) % n2_;
    return X[static_cast<std::size_t>(i1) * n2_ + static_cast<std::size_t>(i2)];
}

bool FourierSeries1D::is_hermitian(double tol) const {
    for (int k = 0; k <= bw_; ++k) {
        if (std::abs(at(-k) - std::conj(at(k))) > tol) return false;
    }
    return true;
}

bool FourierSeries2D::is_hermitian(double tol) const {
    for (int k1 = -K1_; k1 <= K1_; ++k1) {
        for (int k2 = -K2_; k2 <= K2_; ++k2) {
            if (std::abs(at(-k1, -k2) - std::conj(at(k1, k2))) > tol) return false;
        }
    }
    return true;
}

FourierSeries2D& FourierSeries2D::operator+=(const FourierSeries2D& o) {
    if (!same_shape(o)) throw std::invalid_argument("FourierSeries2D: shape mismatch in +=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FourierSeries2D& FourierSeries2D::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

cplx inner_product(const FourierSeries2D& g, const FourierSeries2D& h) {
    const int K1 = std::min(g.bandwidth1(), h.bandwidth1());
    const int K2 = std::min(g.bandwidth2(), h.bandwidth2());
    cplx acc{0.0, 0.0};
    for (int k1 = -K1; k1 <= K1; ++k1)
        for (int k2 = -K2; k2 <= K2; ++k2) acc += g.at(k1, k2) * std::conj(h.at(k1, k2));
    return acc;
}

double norm_sq(const FourierSeries2D& g) {
    double acc = 0.0;
    for (const auto& v : g.coeffs()) acc += std::norm(v);
    return acc;
}

FourierSeries2D convolve(const FourierSeries2D& g, const FourierSeries2D& h) {
    const int K1 = std::min(g.bandwidth1(), h.bandwidth1());
    const int K2 = std::min(g.bandwidth2(), h.bandwidth2());
    FourierSeries2D out(K1, K2);
    for (int k1 = -K1; k1 <= K1; ++k1)
        for (int k2 = -K2; k2 <= K2; ++k2) out.at(k1, k2) = g.at(k1, k2) * h.at(k1, k2);
    return out;
}

FourierSeries2D resize_bandwidth(const FourierSeries2D& g, int K1, int K2) {
    FourierSeries2D out(K1, K2);
    const int m1 = std::min(K1, g.bandwidth1());
    const int m2 = std::min(K2, g.bandwidth2());
    for (int k1 = -m1; k1 <= m1; ++k1)
        for (int k2 = -m2; k2 <= m2; ++k2) out.at(k1, k2) = g.at(k1, k2);
    return out;
}

FourierSeries2D centered_spectrum(const DiscreteSignal2D& x, int K1, int K2) {
    const auto& X = x.dft();
    const int n1 = x.n1(), n2 = x.n2();
    FourierSeries2D out(K1, K2);
    for (int k1 = -K1; k1 <= K1; ++k1) {
        const int i1 = ((k1 % n1) + n1) % n1;
        for (int k2 = -K2; k2 <= K2; ++k2) {
            const int i2 = ((k2 % n2) + n2) % n2;
            out.at(k1, k2) = X[static_cast<std::size_t>(i1) * n2 + i2];
        }
    }
    return out;
}

cplx evaluate(const FourierSeries2D& g, double t1, double t2) {
    const int K1 = g.bandwidth1(), K2 = g.bandwidth2();
    const cplx step2 = std::polar(1.0, 2.0 * std::numbers::pi * t2);
    // inner sums over k2 per row, phases by recurrence
    cplx acc{0.0, 0.0};
    const cplx step1 = std::polar(1.0, 2.0 * std::numbers::pi * t1);
    cplx p1 = std::polar(1.0, -2.0 * std::numbers::pi * K1 * t1);
    for (int k1 = -K1; k1 <= K1; ++k1) {
        cplx rowacc{0.0, 0.0};
        cplx p2 = std::polar(1.0, -2.0 * std::numbers::pi * K2 * t2);
        for (int k2 = -K2; k2 <= K2; ++k2) {
            rowacc += g.at(k1, k2) * p2;
            p2 *= step2;
        }
        acc += rowacc * p1;
        p1 *= step1;
    }
    return acc;
}

cplx evaluate(const FourierSeries1D& g, double t) {
    const int K = g.bandwidth();
    const cplx step = std::polar(1.0, 2.0 * std::numbers::pi * t);
    cplx p = std::polar(1.0, -2.0 * std::numbers::pi * K * t);
    cplx acc{0.0, 0.0};
    for (int k = -K; k <= K; ++k) {
        acc += g.at(k) * p;
        p *= step;
    }
    return acc;
}

ComplexMatrix coeff_convolution_matrix(const FourierSeries1D& w, int K) {
    const int L = w.bandwidth();
    ComplexMatrix m;
    m.rows = 2 * K + 2 * L + 1;
    m.cols = 2 * K + 1;
    m.a.assign(static_cast<std::size_t>(m.rows) * m.cols, cplx{0.0, 0.0});
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            const int k = r - L - c;  // (r - K - L) - (c - K)
            if (k >= -L && k <= L) m.at(r, c) = w.at(k);
        }
    }
    return m;
}

void symmetrize_hermitian(FourierSeries2D& g) {
    const int K1 = g.bandwidth1(), K2 = g.bandwidth2();
    for (int k1 = 0; k1 <= K1; ++k1) {
        for (int k2 = -K2; k2 <= K2; ++k2) {
            if (k1 == 0 && k2 < 0) continue;
            const cplx avg = 0.5 * (g.at(k1, k2) + std::conj(g.at(-k1, -k2)));
            g.at(k1, k2) = avg;
            g.at(-k1, -k2) = std::conj(avg);
        }
    }
}

}  // namespace contconv
