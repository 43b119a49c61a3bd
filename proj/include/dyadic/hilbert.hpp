#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dyadic/linop.hpp"
#include "dyadic/shifted_grid.hpp"

namespace dyadic {

/// Integral of 1/(x-y) over [m, m+1) x [0, 1) (unit cells m apart); odd in m, zero at m = 0.
double cell_pair_kernel(std::int64_t m);

/// Toeplitz discretization: the output cell average of H applied to a step function, with
/// the exact cell-pair double integrals. Uses the OpenMP kernel unless `parallel` is false.
LinOp hilbert_direct(const DyadicGrid& g, bool parallel = true);

struct AveragedShiftOptions {
    int samples = 1;
    std::uint64_t seed = 0;
    /// Snap interval quarter points to the cell lattice (generalized Haar functions)
    /// instead of projecting the exact Haar functions onto the cells.
    bool snapped = false;
    /// Use alpha = 0, r = 1 for every sample.
    bool force_standard = false;
    /// Samples are split into this many fixed blocks, summed in block order.
    int blocks = 8;
    bool parallel = true;
};

struct AveragedShift {
    /// Kernel-convention matrix (columns are images of chi_j / |cell|), averaged over samples.
    Eigen::MatrixXd kernel;
    /// Per-block averages, same convention; kept only when requested.
    std::vector<Eigen::MatrixXd> block_kernels;
    std::vector<int> block_samples;
};

/// Monte-Carlo average of the shifts S^{alpha,r}: r = 2^U with U uniform on [0,1) (density 1/r),
/// alpha uniform on [0, r |base|), one period of the dilated tree.
AveragedShift averaged_shift(const DyadicGrid& g, const AveragedShiftOptions& opts, bool keep_blocks = false);
LinOp hilbert_averaged(const DyadicGrid& g, int n_samples, std::uint64_t seed);
LinOp hilbert_averaged(const DyadicGrid& g, const AveragedShiftOptions& opts);

/// Kernel-convention matrix of one shifted shift S^{alpha,r}.
Eigen::MatrixXd shifted_shift_kernel(const DyadicGrid& g, const ShiftedGridParams& params, bool snapped);

/// Least-squares fit K_ij ~ c * ref_ij over off-diagonal entries.
struct KernelFit {
    double correlation = 0.0;
    double c = 0.0;
    double residual = 0.0;  // ||K - c ref|| / ||K|| over the fitted entries
};

/// Reference -1/(x_i - x_j) at cell centres.
KernelFit fit_midpoint_kernel(const Eigen::MatrixXd& kernel, const DyadicGrid& g);
/// Reference -psi(i-j)/|cell|, the cell average of -1/(x-y).
KernelFit fit_cell_kernel(const Eigen::MatrixXd& kernel, const DyadicGrid& g);

}  // namespace dyadic
