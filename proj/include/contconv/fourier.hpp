#pragma once

#include <cassert>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace contconv {

using cplx = std::complex<double>;

// The spatial period of every series. The coordinate system is scaled so
// that one patch/region always covers [0,1) per dimension.
inline constexpr double kPeriod = 1.0;

/// Truncated Fourier series of a 1-periodic function of one variable.
/// Coefficients are stored centered: index k in [-K, K] maps to slot k+K.
class FourierSeries1D {
public:
    explicit FourierSeries1D(int bandwidth)
        : bw_(bandwidth), c_(2 * static_cast<std::size_t>(bandwidth) + 1) {
        assert(bandwidth >= 0);
    }

    int bandwidth() const { return bw_; }
    int size() const { return 2 * bw_ + 1; }
    static constexpr double period() { return kPeriod; }

    cplx& at(int k) {
        assert(k >= -bw_ && k <= bw_);
        return c_[static_cast<std::size_t>(k + bw_)];
    }
    cplx at(int k) const {
        assert(k >= -bw_ && k <= bw_);
        return c_[static_cast<std::size_t>(k + bw_)];
    }
    cplx coeff_or_zero(int k) const {
        return (k < -bw_ || k > bw_) ? cplx{0.0, 0.0} : at(k);
    }

    std::span<cplx> coeffs() { return c_; }
    std::span<const cplx> coeffs() const { return c_; }

    bool is_hermitian(double tol = 1e-12) const;

private:
    int bw_;
    std::vector<cplx> c_;
};

/// Truncated Fourier series of a 1-periodic function of two variables,
/// stored row-major over (k1, k2) in [-K1, K1] x [-K2, K2].
class FourierSeries2D {
public:
    FourierSeries2D() : K1_(0), K2_(0), c_(1) {}
    FourierSeries2D(int K1, int K2)
        : K1_(K1), K2_(K2),
          c_(static_cast<std::size_t>(2 * K1 + 1) * static_cast<std::size_t>(2 * K2 + 1)) {
        assert(K1 >= 0 && K2 >= 0);
    }

    int bandwidth1() const { return K1_; }
    int bandwidth2() const { return K2_; }
    int rows() const { return 2 * K1_ + 1; }
    int cols() const { return 2 * K2_ + 1; }
    std::size_t size() const { return c_.size(); }
    static constexpr double period() { return kPeriod; }

    cplx& at(int k1, int k2) {
        assert(k1 >= -K1_ && k1 <= K1_ && k2 >= -K2_ && k2 <= K2_);
        return c_[static_cast<std::size_t>(k1 + K1_) * cols() + static_cast<std::size_t>(k2 + K2_)];
    }
    cplx at(int k1, int k2) const {
        assert(k1 >= -K1_ && k1 <= K1_ && k2 >= -K2_ && k2 <= K2_);
        return c_[static_cast<std::size_t>(k1 + K1_) * cols() + static_cast<std::size_t>(k2 + K2_)];
    }
    cplx coeff_or_zero(int k1, int k2) const {
        return (k1 < -K1_ || k1 > K1_ || k2 < -K2_ || k2 > K2_) ? cplx{0.0, 0.0} : at(k1, k2);
    }

    std::span<cplx> coeffs() { return c_; }
    std::span<const cplx> coeffs() const { return c_; }

    bool is_hermitian(double tol = 1e-12) const;
    bool same_shape(const FourierSeries2D& o) const { return K1_ == o.K1_ && K2_ == o.K2_; }

    FourierSeries2D& operator+=(const FourierSeries2D& o);
    FourierSeries2D& operator*=(double s);

private:
    int K1_, K2_;
    std::vector<cplx> c_;
};

/// Real-valued discrete signal on an N1 x N2 grid with a lazily computed,
/// shared DFT cache. Immutable after construction; the cache is populated
/// at most once and may be read concurrently.
class DiscreteSignal2D {
public:
    DiscreteSignal2D(int n1, int n2, std::vector<double> samples)
        : n1_(n1), n2_(n2), s_(std::move(samples)), cache_(std::make_shared<DftCache>()) {
        if (n1 < 1 || n2 < 1) throw std::invalid_argument("DiscreteSignal2D: empty grid");
        if (s_.size() != static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2))
            throw std::invalid_argument("DiscreteSignal2D: sample count mismatch");
    }
    DiscreteSignal2D(int n1, int n2)
        : DiscreteSignal2D(n1, n2, std::vector<double>(static_cast<std::size_t>(n1) * n2, 0.0)) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    double at(int i1, int i2) const { return s_[static_cast<std::size_t>(i1) * n2_ + i2]; }
    std::span<const double> samples() const { return s_; }

    // Full N1 x N2 DFT, unnormalized forward convention. Row-major over
    // frequencies (k1, k2) in [0, N1) x [0, N2); extend by N-periodicity.
    const std::vector<cplx>& dft() const;

    // DFT value at arbitrary integer frequencies (N-periodic extension).
    cplx dft_at(long long k1, long long k2) const;

private:
    struct DftCache {
        std::once_flag once;
        std::vector<cplx> X;
    };
    int n1_, n2_;
    std::vector<double> s_;
    std::shared_ptr<DftCache> cache_;
};

// --- fourier algebra ------------------------------------------------------

// <g, h> = sum_k g[k] conj(h[k]); equals (1/T^2) integral of g conj(h).
// Mixed bandwidths are handled by zero-extending the narrower series.
cplx inner_product(const FourierSeries2D& g, const FourierSeries2D& h);

double norm_sq(const FourierSeries2D& g);

// Circular convolution: pointwise coefficient product on the intersection
// of the index ranges (result bandwidth = min of the inputs).
FourierSeries2D convolve(const FourierSeries2D& g, const FourierSeries2D& h);

// Zero-extend (or crop) to the requested bandwidths.
FourierSeries2D resize_bandwidth(const FourierSeries2D& g, int K1, int K2);

// DFT values on the centered index range [-K1,K1] x [-K2,K2] (N-periodic
// extension of the fundamental grid).
FourierSeries2D centered_spectrum(const DiscreteSignal2D& x, int K1, int K2);

// g(t) = sum_k g[k] e^{i 2 pi k . t}
cplx evaluate(const FourierSeries2D& g, double t1, double t2);
cplx evaluate(const FourierSeries1D& g, double t);

// Toeplitz matrix M of shape (2K+2L+1) x (2K+1) with M v = coefficients of
// w * v for any v of bandwidth K; L = bandwidth(w). Row-major.
struct ComplexMatrix {
    int rows = 0, cols = 0;
    std::vector<cplx> a;
    cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    cplx at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};
ComplexMatrix coeff_convolution_matrix(const FourierSeries1D& w, int K);

// Force exact Hermitian symmetry by averaging g[k] with conj(g[-k]).
void symmetrize_hermitian(FourierSeries2D& g);

}  // namespace contconv
