#include "contconv/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace contconv {

std::pair<int, int> filter_bandwidths(const DiscreteSignal2D& channel) {
    return {channel.n1() / 2, channel.n2() / 2};
}

TrainingSample transform_query(const FeatureMap& x, KernelFt ft) {
    if (x.channels.empty()) throw std::invalid_argument("transform_query: no channels");
    TrainingSample s;
    s.a.reserve(x.channels.size());
    for (const auto& ch : x.channels) {
        const auto [k1, k2] = filter_bandwidths(ch);
        s.a.push_back(interpolate(ch, k1, k2, ft));
    }
    return s;
}

TrainingSample transform_sample(const FeatureMap& x, const LabelSpec& label, KernelFt ft) {
    TrainingSample s = transform_query(x, ft);
    s.label = label;
    int K1 = 0, K2 = 0;
    for (const auto& a : s.a) {
        K1 = std::max(K1, a.bandwidth1());
        K2 = std::max(K2, a.bandwidth2());
    }
    s.y1 = label_coeffs_1d(label.u1, label.sigma1, K1);
    s.y2 = label_coeffs_1d(label.u2, label.sigma2, K2);
    return s;
}

FilterBank zero_filter(const TrainingSample& like) {
    FilterBank f;
    f.filters.reserve(like.a.size());
    for (const auto& a : like.a) f.filters.emplace_back(a.bandwidth1(), a.bandwidth2());
    return f;
}

FilterBank zero_filter(const FeatureMap& like, KernelFt ft) {
    return zero_filter(transform_query(like, ft));
}

FourierSeries2D apply_operator(const FilterBank& f, const TrainingSample& x) {
    if (f.filters.size() != x.a.size())
        throw std::invalid_argument("apply_operator: channel count mismatch");
    int K1 = 0, K2 = 0;
    for (const auto& a : x.a) {
        K1 = std::max(K1, a.bandwidth1());
        K2 = std::max(K2, a.bandwidth2());
    }
    FourierSeries2D s(K1, K2);
    for (std::size_t d = 0; d < x.a.size(); ++d) {
        const auto& a = x.a[d];
        const auto& fd = f.filters[d];
        if (!a.same_shape(fd))
            throw std::invalid_argument("apply_operator: filter/channel bandwidth mismatch");
        const int k1d = a.bandwidth1(), k2d = a.bandwidth2();
        for (int k1 = -k1d; k1 <= k1d; ++k1)
            for (int k2 = -k2d; k2 <= k2d; ++k2) s.at(k1, k2) += fd.at(k1, k2) * a.at(k1, k2);
    }
    return s;
}

FourierSeries2D apply_operator(const FilterBank& f, const FeatureMap& x, KernelFt ft) {
    return apply_operator(f, transform_query(x, ft));
}

SampleMemory::SampleMemory(std::size_t capacity, double learning_rate)
    : capacity_(capacity), lambda_(learning_rate) {
    if (capacity < 1) throw std::invalid_argument("SampleMemory: capacity must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw std::invalid_argument("SampleMemory: learning rate must be in (0, 1]");
}

void SampleMemory::update(TrainingSample sample) {
    if (lambda_ == 1.0) {
        // frame-to-frame mode: the divergent recurrence is bypassed
        samples_.clear();
        rel_.clear();
        sample.weight = 1.0;
        samples_.push_back(std::move(sample));
        rel_.push_back(1.0);
        return;
    }
    // raw weights scale as (1-lambda)^{-j}; store them relative to the
    // newest sample so nothing overflows
    for (auto& r : rel_) r *= (1.0 - lambda_);
    rel_.push_back(1.0);
    samples_.push_back(std::move(sample));
    if (samples_.size() > capacity_) {
        std::size_t evict = 0;
        for (std::size_t i = 1; i < rel_.size(); ++i)
            if (rel_[i] < rel_[evict]) evict = i;  // oldest wins ties
        samples_.erase(samples_.begin() + static_cast<std::ptrdiff_t>(evict));
        rel_.erase(rel_.begin() + static_cast<std::ptrdiff_t>(evict));
    }
    normalize();
}

void SampleMemory::normalize() {
    double sum = 0.0;
    for (double r : rel_) sum += r;
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i].weight = rel_[i] / sum;
}

double objective(const FilterBank& f, const SampleMemory& mem, const PenaltySpec& penalty) {
    double e = 0.0;
    for (const auto& s : mem.samples()) {
        FourierSeries2D r = apply_operator(f, s);
        const auto y = label_coeffs(s.label, r.bandwidth1(), r.bandwidth2());
        double res = 0.0;
        auto rc = r.coeffs();
        auto yc = y.coeffs();
        for (std::size_t i = 0; i < rc.size(); ++i) res += std::norm(rc[i] - yc[i]);
        e += s.weight * res;
    }
    const auto st = penalty_stencil(penalty);
    for (const auto& fd : f.filters) e += norm_sq(stencil_convolve(st, fd));
    return e;
}

NormalOperator::NormalOperator(const SampleMemory& mem, const PenaltySpec& penalty)
    : mem_(mem), stencil_(penalty_stencil(penalty)) {
    if (mem.size() == 0) throw std::invalid_argument("NormalOperator: empty memory");
    const auto& first = mem.samples().front();
    const std::size_t D = first.a.size();
    K1d_.resize(D);
    K2d_.resize(D);
    offset_.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
        K1d_[d] = first.a[d].bandwidth1();
        K2d_[d] = first.a[d].bandwidth2();
        K1_ = std::max(K1_, K1d_[d]);
        K2_ = std::max(K2_, K2d_[d]);
        offset_[d] = total_;
        total_ += static_cast<std::size_t>(2 * K1d_[d] + 1) * (2 * K2d_[d] + 1);
    }
    labels_.reserve(mem.size());
    for (const auto& s : mem.samples()) {
        if (s.a.size() != D) throw std::invalid_argument("NormalOperator: ragged channel counts");
        labels_.push_back(label_coeffs(s.label, K1_, K2_));
    }
}

void NormalOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != total_ || out.size() != total_)
        throw std::invalid_argument("NormalOperator::apply: size mismatch");
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    const std::size_t D = K1d_.size();
    const int cols = 2 * K2_ + 1;
    std::vector<cplx> r(static_cast<std::size_t>(2 * K1_ + 1) * cols);
    unsigned long long work = 0;
    for (const auto& s : mem_.samples()) {
        std::fill(r.begin(), r.end(), cplx{0.0, 0.0});
        for (std::size_t d = 0; d < D; ++d) {
            const cplx* a = s.a[d].coeffs().data();
            const cplx* v = in.data() + offset_[d];
            const int rows_d = 2 * K1d_[d] + 1, cols_d = 2 * K2d_[d] + 1;
            const int r0 = K1_ - K1d_[d], c0 = K2_ - K2d_[d];
            for (int i = 0; i < rows_d; ++i) {
                cplx* rr = r.data() + static_cast<std::size_t>(r0 + i) * cols + c0;
                const cplx* ai = a + static_cast<std::size_t>(i) * cols_d;
                const cplx* vi = v + static_cast<std::size_t>(i) * cols_d;
                for (int j = 0; j < cols_d; ++j) rr[j] += ai[j] * vi[j];
            }
            work += static_cast<unsigned long long>(rows_d) * cols_d;
        }
        const double alpha = s.weight;
        for (std::size_t d = 0; d < D; ++d) {
            const cplx* a = s.a[d].coeffs().data();
            cplx* o = out.data() + offset_[d];
            const int rows_d = 2 * K1d_[d] + 1, cols_d = 2 * K2d_[d] + 1;
            const int r0 = K1_ - K1d_[d], c0 = K2_ - K2d_[d];
            for (int i = 0; i < rows_d; ++i) {
                const cplx* rr = r.data() + static_cast<std::size_t>(r0 + i) * cols + c0;
                const cplx* ai = a + static_cast<std::size_t>(i) * cols_d;
                cplx* oi = o + static_cast<std::size_t>(i) * cols_d;
                for (int j = 0; j < cols_d; ++j) oi[j] += alpha * std::conj(ai[j]) * rr[j];
            }
            work += static_cast<unsigned long long>(rows_d) * cols_d;
        }
    }
    // regularization: W^H W per channel
    for (std::size_t d = 0; d < D; ++d) {
        FourierSeries2D vd(K1d_[d], K2d_[d]);
        std::copy_n(in.data() + offset_[d], vd.size(), vd.coeffs().data());
        const auto g = stencil_correlate(stencil_, stencil_convolve(stencil_, vd), K1d_[d], K2d_[d]);
        const cplx* gc = g.coeffs().data();
        cplx* o = out.data() + offset_[d];
        for (std::size_t i = 0; i < g.size(); ++i) o[i] += gc[i];
        work += 2ull * stencil_.taps.size() * g.size();
    }
    work_.fetch_add(work, std::memory_order_relaxed);
}

std::vector<cplx> NormalOperator::rhs() const {
    std::vector<cplx> b(total_, cplx{0.0, 0.0});
    const std::size_t D = K1d_.size();
    const int cols = 2 * K2_ + 1;
    std::size_t j = 0;
    for (const auto& s : mem_.samples()) {
        const auto& y = labels_[j++];
        const double alpha = s.weight;
        for (std::size_t d = 0; d < D; ++d) {
            const cplx* a = s.a[d].coeffs().data();
            cplx* o = b.data() + offset_[d];
            const int rows_d = 2 * K1d_[d] + 1, cols_d = 2 * K2d_[d] + 1;
            const int r0 = K1_ - K1d_[d], c0 = K2_ - K2d_[d];
            for (int i = 0; i < rows_d; ++i) {
                const cplx* yi = y.coeffs().data() + static_cast<std::size_t>(r0 + i) * cols + c0;
                const cplx* ai = a + static_cast<std::size_t>(i) * cols_d;
                cplx* oi = o + static_cast<std::size_t>(i) * cols_d;
                for (int k = 0; k < cols_d; ++k) oi[k] += alpha * std::conj(ai[k]) * yi[k];
            }
        }
    }
    return b;
}

std::vector<cplx> NormalOperator::pack(const FilterBank& f) const {
    std::vector<cplx> v(total_);
    for (std::size_t d = 0; d < f.filters.size(); ++d)
        std::copy_n(f.filters[d].coeffs().data(), f.filters[d].size(), v.data() + offset_[d]);
    return v;
}

FilterBank NormalOperator::unpack(std::span<const cplx> v) const {
    FilterBank f;
    for (std::size_t d = 0; d < K1d_.size(); ++d) {
        FourierSeries2D fd(K1d_[d], K2d_[d]);
        std::copy_n(v.data() + offset_[d], fd.size(), fd.coeffs().data());
        f.filters.push_back(std::move(fd));
    }
    return f;
}

namespace {
double dot_re(std::span<const cplx> a, std::span<const cplx> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
}
}  // namespace

CgResult solve_cg(const NormalOperator& op, std::span<const cplx> b, std::vector<cplx>& x,
                  const CgOptions& opts) {
    const std::size_t n = op.size();
    if (x.size() != n) x.assign(n, cplx{0.0, 0.0});
    CgResult res;
    std::vector<cplx> r(n), p(n), Ap(n);
    op.apply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    p = r;
    double rs = dot_re(r, r);
    const double bnorm = std::sqrt(dot_re(b, b));
    const double stop = opts.rel_tol > 0.0 ? opts.rel_tol * bnorm : -1.0;
    if (stop >= 0.0 && std::sqrt(rs) <= stop) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < opts.max_iters; ++it) {
        op.apply(p, Ap);
        const double curv = dot_re(p, Ap);
        const double pnorm = dot_re(p, p);
        if (!(curv > pnorm * 1e-300)) {
            res.breakdown = true;
            return res;
        }
        const double alpha = rs / curv;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rs_new = dot_re(r, r);
        res.iters = it + 1;
        if (stop >= 0.0 && std::sqrt(rs_new) <= stop) {
            res.converged = true;
            return res;
        }
        const double beta = rs_new / rs;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rs = rs_new;
    }
    return res;
}

CgResult train_filter_cg(FilterBank& filter, const SampleMemory& mem, const PenaltySpec& penalty,
                         const CgOptions& opts) {
    NormalOperator op(mem, penalty);
    auto x = op.pack(filter);
    const auto b = op.rhs();
    const auto res = solve_cg(op, b, x, opts);
    filter = op.unpack(x);
    return res;
}

FilterBank closed_form_filter(const SampleMemory& mem, double beta) {
    if (mem.size() == 0) throw std::invalid_argument("closed_form_filter: empty memory");
    if (mem.samples().front().a.size() != 1)
        throw std::invalid_argument("closed_form_filter: single-channel only");
    if (!(beta > 0.0)) throw std::invalid_argument("closed_form_filter: beta must be positive");
    const auto& a0 = mem.samples().front().a[0];
    const int K1 = a0.bandwidth1(), K2 = a0.bandwidth2();
    const int rows = 2 * K1 + 1, cols = 2 * K2 + 1;
    std::vector<cplx> num(static_cast<std::size_t>(rows) * cols, cplx{0.0, 0.0});
    std::vector<double> den(num.size(), 0.0);
    for (const auto& s : mem.samples()) {
        const bool cached = s.y1.size() == static_cast<std::size_t>(rows) &&
                            s.y2.size() == static_cast<std::size_t>(cols);
        const auto y1 = cached ? s.y1 : label_coeffs_1d(s.label.u1, s.label.sigma1, K1);
        const auto y2 = cached ? s.y2 : label_coeffs_1d(s.label.u2, s.label.sigma2, K2);
        const double alpha = s.weight;
        const cplx* a = s.a[0].coeffs().data();
        for (int i = 0; i < rows; ++i) {
            const cplx row = alpha * y1[static_cast<std::size_t>(i)];
            const cplx* ai = a + static_cast<std::size_t>(i) * cols;
            cplx* ni = num.data() + static_cast<std::size_t>(i) * cols;
            double* di = den.data() + static_cast<std::size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) {
                ni[j] += std::conj(ai[j]) * (row * y2[static_cast<std::size_t>(j)]);
                di[j] += alpha * std::norm(ai[j]);
            }
        }
    }
    FilterBank f;
    FourierSeries2D fd(K1, K2);
    cplx* out = fd.coeffs().data();
    const double b2 = beta * beta;
    for (std::size_t i = 0; i < num.size(); ++i) out[i] = num[i] / (den[i] + b2);
    f.filters.push_back(std::move(fd));
    return f;
}

}  // namespace contconv
