#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "contconv/fourier.hpp"
#include "contconv/interp.hpp"
#include "contconv/labels.hpp"
#include "contconv/regularizer.hpp"

namespace contconv {

/// One multi-channel training/query sample: D real channels extracted from
/// the same image region, each with its own resolution.
struct FeatureMap {
    std::vector<DiscreteSignal2D> channels;
};

/// Learned model: one filter series per channel with bandwidths
/// K_d = (floor(N1_d/2), floor(N2_d/2)).
struct FilterBank {
    std::vector<FourierSeries2D> filters;
};

/// A sample stored in Fourier form: per channel the diagonal entries
/// a_d[k] = X_d[k1,k2] b_{N1}[k1] b_{N2}[k2], plus its label and weight.
struct TrainingSample {
    std::vector<FourierSeries2D> a;
    LabelSpec label;
    double weight = 0.0;
    // 1-D label factors on the joint bandwidths, cached so per-frame refits
    // stay off the exp() path; filled by transform_sample
    std::vector<cplx> y1, y2;
};

std::pair<int, int> filter_bandwidths(const DiscreteSignal2D& channel);

TrainingSample transform_sample(const FeatureMap& x, const LabelSpec& label,
                                KernelFt ft = &cubic_bspline_ft);

/// Like transform_sample, for detection-time queries: no label attached.
TrainingSample transform_query(const FeatureMap& x, KernelFt ft = &cubic_bspline_ft);

FilterBank zero_filter(const TrainingSample& like);
FilterBank zero_filter(const FeatureMap& like, KernelFt ft = &cubic_bspline_ft);

/// Confidence coefficients s[k] = sum_d f_d[k] a_d[k] on the max-bandwidth
/// grid (narrower channels contribute only on their own range).
FourierSeries2D apply_operator(const FilterBank& f, const TrainingSample& x);
FourierSeries2D apply_operator(const FilterBank& f, const FeatureMap& x,
                               KernelFt ft = &cubic_bspline_ft);

/// Weighted set of stored samples. Insertion follows the importance-weight
/// recurrence alpha_j = alpha_{j-1}/(1-lambda) with renormalization; when
/// full, the smallest-weight sample (oldest on ties) is evicted.
/// learning_rate = 1 degenerates to a single-sample (frame-to-frame) memory.
class SampleMemory {
public:
    explicit SampleMemory(std::size_t capacity = 400, double learning_rate = 0.0075);

    void update(TrainingSample sample);

    const std::vector<TrainingSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    std::size_t capacity() const { return capacity_; }
    double learning_rate() const { return lambda_; }

private:
    void normalize();

    std::vector<TrainingSample> samples_;
    std::vector<double> rel_;  // raw weights relative to the newest sample
    std::size_t capacity_;
    double lambda_;
};

/// Value of the Fourier-domain training objective: weighted data residuals
/// on the joint grid plus the penalty term per channel, all sums truncated
/// to the stored bandwidths.
double objective(const FilterBank& f, const SampleMemory& mem, const PenaltySpec& penalty);

/// Matrix-free normal operator v -> (A^H Gamma A + W^H W) v on stacked
/// per-channel coefficient vectors, plus the right-hand side A^H Gamma y.
/// Holds references into the memory; the memory must outlive the operator.
class NormalOperator {
public:
    NormalOperator(const SampleMemory& mem, const PenaltySpec& penalty);

    std::size_t size() const { return total_; }
    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    std::vector<cplx> rhs() const;

    // flat layout <-> FilterBank
    std::vector<cplx> pack(const FilterBank& f) const;
    FilterBank unpack(std::span<const cplx> v) const;

    // coefficient-multiply count of all apply() calls so far; grows linearly
    // with the number of channels
    unsigned long long work_units() const { return work_.load(); }

private:
    const SampleMemory& mem_;
    PenaltyStencil stencil_;
    std::vector<int> K1d_, K2d_;
    std::vector<std::size_t> offset_;
    int K1_ = 0, K2_ = 0;
    std::size_t total_ = 0;
    std::vector<FourierSeries2D> labels_;  // per sample, on the joint grid
    mutable std::atomic<unsigned long long> work_{0};
};

struct CgOptions {
    int max_iters = 100;
    double rel_tol = 0.0;  // 0 disables the residual stop
};

struct CgResult {
    int iters = 0;
    bool breakdown = false;
    bool converged = false;  // residual stop reached (only with rel_tol > 0)
};

/// Plain conjugate gradient on the Hermitian positive definite system
/// op x = b, warm-started from x. On curvature breakdown the current
/// iterate is kept and the flag is set.
CgResult solve_cg(const NormalOperator& op, std::span<const cplx> b, std::vector<cplx>& x,
                  const CgOptions& opts);

/// Convenience wrapper: run CG on the normal equations for `filter`.
CgResult train_filter_cg(FilterBank& filter, const SampleMemory& mem, const PenaltySpec& penalty,
                         const CgOptions& opts);

/// Single-channel closed form: f[k] = sum_j a_j conj(A_j[k]) y_j[k] /
/// (sum_j a_j |A_j[k]|^2 + beta^2). Requires D = 1.
FilterBank closed_form_filter(const SampleMemory& mem, double beta);

}  // namespace contconv
