#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace contconv::detail {

// Process-wide cache of twiddle tables. fwd[k*n + j] = exp(-i 2 pi k j / n),
// computed from the exact residue (k*j) mod n so that N-periodic indexing of
// the transform is bit-exact.
struct DftTables {
    int n = 0;
    std::vector<std::complex<double>> fwd;
};

std::shared_ptr<const DftTables> dft_tables(int n);

// grid[m*(2K+1) + (k+K)] = exp(+i 2 pi k m / M), M = 2K+1, m = 0..M-1.
// Used for evaluating a bandwidth-K series on its natural M-point grid.
struct GridTables {
    int K = 0;
    std::vector<std::complex<double>> phase;
};

std::shared_ptr<const GridTables> grid_tables(int K);

}  // namespace contconv::detail
