#pragma once

#include <vector>

#include "contconv/fourier.hpp"

namespace contconv {

struct LocalizationResult {
    double t1 = 0.0, t2 = 0.0;
    double score = 0.0;
    int newton_iters_used = 0;
    bool converged = false;
};

/// Scores on the natural grid t = (n1/(2K1+1), n2/(2K2+1)), computed as a
/// scaled inverse DFT of the coefficients. Row-major (2K1+1) x (2K2+1).
/// Throws if the series is not Hermitian (imaginary residue above 1e-8).
std::vector<double> grid_values(const FourierSeries2D& s);

struct GridPeak {
    int n1 = 0, n2 = 0;
    double value = 0.0;
};

/// Argmax over the grid; ties resolve to the lowest (n1, n2) in scan order.
GridPeak grid_search(const FourierSeries2D& s);

/// Newton ascent from t0 with analytic gradient and Hessian of the series.
/// Falls back to a fixed-length gradient step when the Hessian is not
/// negative definite; coordinates wrap modulo 1. Never returns a point
/// scoring below t0.
LocalizationResult newton_refine(const FourierSeries2D& s, double t01, double t02, int max_iters);

/// Grid search followed by Newton refinement.
LocalizationResult localize_peak(const FourierSeries2D& s, int newton_iters = 5);

}  // namespace contconv
