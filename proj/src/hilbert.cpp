#include "dyadic/hilbert.hpp"

#include <cmath>
#include <numbers>

#include "dyadic/kernels.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

double cell_pair_kernel(std::int64_t m) {
    if (m == 0) return 0.0;
    if (m < 0) return -cell_pair_kernel(-m);
    if (m == 1) return 2.0 * std::numbers::ln2;
    const double md = static_cast<double>(m);
    if (m < 8) {
        // (m+1) ln(m+1) - 2m ln m + (m-1) ln(m-1) with the ln m terms cancelled
        return (md + 1.0) * std::log1p(1.0 / md) + (md - 1.0) * std::log1p(-1.0 / md);
    }
    // sum_k m^{-(2k-1)} / (k (2k-1))
    const double x = 1.0 / md, x2 = x * x;
    double term = x, s = 0.0;
    for (int k = 1; k <= 12; ++k) {
        s += term / (k * (2.0 * k - 1.0));
        term *= x2;
    }
    return s;
}

LinOp hilbert_direct(const DyadicGrid& g, bool parallel) {
    const std::size_t n = g.cells();
    auto t = std::make_shared<std::vector<double>>(2 * n - 1);
    for (std::size_t i = 0; i < t->size(); ++i)
        (*t)[i] = cell_pair_kernel(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(n - 1)) / std::numbers::pi;
    auto fwd = [t, parallel](std::span<const double> x) {
        std::vector<double> y(x.size());
        if (parallel)
            kernels::parallel::toeplitz_apply(*t, x, y);
        else
            kernels::serial::toeplitz_apply(*t, x, y);
        return y;
    };
    // Odd kernel: the adjoint is the negative.
    auto adj = [fwd](std::span<const double> x) {
        auto y = fwd(x);
        for (double& v : y) v = -v;
        return y;
    };
    return LinOp(g, "hilbert", fwd, adj);
}

namespace {

struct Seg {
    std::size_t lo, hi;  // cell range [lo, hi)
    double v;            // average over each of those cells
};

// Cell averages of v * chi_[x0,x1) (x in cell units), appended as runs.
void add_piece(std::vector<Seg>& out, double x0, double x1, double v, std::size_t n) {
    if (!(x1 > x0) || v == 0.0) return;
    const double top = static_cast<double>(n);
    x0 = std::max(0.0, x0);
    x1 = std::min(top, x1);
    if (!(x1 > x0)) return;
    const auto i0 = std::min(n - 1, static_cast<std::size_t>(std::floor(x0)));
    const auto i1 = std::min(n - 1, static_cast<std::size_t>(std::max(0.0, std::ceil(x1) - 1.0)));
    if (i0 >= i1) {
        out.push_back({i0, i0 + 1, v * (x1 - x0)});
        return;
    }
    out.push_back({i0, i0 + 1, v * (static_cast<double>(i0 + 1) - x0)});
    if (i1 > i0 + 1) out.push_back({i0 + 1, i1, v});
    out.push_back({i1, i1 + 1, v * (x1 - static_cast<double>(i1))});
}

// (-c/L on [a,m), c/R on [m,b)), the unit-norm mean-zero step on snapped cells.
bool general_haar(std::size_t a, std::size_t m, std::size_t b, double h, double& left, double& right) {
    if (m <= a || b <= m) return false;
    const double L = static_cast<double>(m - a) * h, R = static_cast<double>(b - m) * h;
    const double c = 1.0 / std::sqrt(1.0 / L + 1.0 / R);
    left = -c / L;
    right = c / R;
    return true;
}

// Accumulates the rank-one kernel u (rows) x v (columns) into a difference array of size (n+1)^2.
void add_outer(Eigen::MatrixXd& d, const std::vector<Seg>& rows, const std::vector<Seg>& cols) {
    for (const auto& r : rows)
        for (const auto& c : cols) {
            const double val = r.v * c.v;
            d(r.lo, c.lo) += val;
            d(r.hi, c.lo) -= val;
            d(r.lo, c.hi) -= val;
            d(r.hi, c.hi) += val;
        }
}

// Adds the kernel of S^{alpha,r} (alpha relative to base_start) to the difference array.
void accumulate_shift(Eigen::MatrixXd& d, const DyadicGrid& g, double alpha, double r, bool snapped) {
    const std::size_t n = g.cells();
    const double h = g.cell_width(), lb = g.length(), eps = 1e-12 * lb;
    std::vector<Seg> rows, cols;
    for (int j = 0;; ++j) {
        const double len = r * lb / static_cast<double>(std::int64_t{1} << j);
        if (len < h * (1.0 - 1e-12)) break;
        const auto kmin = static_cast<std::int64_t>(std::ceil((-alpha - eps) / len));
        const auto kmax = static_cast<std::int64_t>(std::floor((lb - len - alpha + eps) / len));
        for (std::int64_t k = kmin; k <= kmax; ++k) {
            const double lo = (alpha + static_cast<double>(k) * len) / h;
            const double q[5] = {lo, lo + 0.25 * len / h, lo + 0.5 * len / h, lo + 0.75 * len / h, lo + len / h};
            rows.clear();
            cols.clear();
            if (!snapped) {
                const double B = 1.0 / std::sqrt(len), A = 1.0 / std::sqrt(0.5 * len);
                add_piece(cols, q[0], q[2], -B, n);
                add_piece(cols, q[2], q[4], B, n);
                add_piece(rows, q[0], q[1], -A, n);
                add_piece(rows, q[1], q[3], A, n);
                add_piece(rows, q[3], q[4], -A, n);
            } else {
                std::size_t s[5];
                for (int t = 0; t < 5; ++t)
                    s[t] = static_cast<std::size_t>(std::clamp(std::round(q[t]), 0.0, static_cast<double>(n)));
                double hl, hr;
                if (!general_haar(s[0], s[2], s[4], h, hl, hr)) continue;
                cols.push_back({s[0], s[2], hl});
                cols.push_back({s[2], s[4], hr});
                double a1, a2;
                if (general_haar(s[0], s[1], s[2], h, a1, a2)) {
                    rows.push_back({s[0], s[1], a1});
                    rows.push_back({s[1], s[2], a2});
                }
                if (general_haar(s[2], s[3], s[4], h, a1, a2)) {
                    rows.push_back({s[2], s[3], -a1});
                    rows.push_back({s[3], s[4], -a2});
                }
            }
            add_outer(d, rows, cols);
        }
    }
}

Eigen::MatrixXd integrate(const Eigen::MatrixXd& d) {
    const Eigen::Index n = d.rows() - 1;
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double run = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            run += d(i, j);
            k(i, j) = run + (j > 0 ? k(i, j - 1) : 0.0);
        }
    }
    // k(i,j) now holds sum over rows <= i of column j plus k(i, j-1): a 2D prefix sum.
    return k;
}

}  // namespace

Eigen::MatrixXd shifted_shift_kernel(const DyadicGrid& g, const ShiftedGridParams& params, bool snapped) {
    if (!(params.r >= 1.0 && params.r < 2.0)) throw Error("shifted shift: r must lie in [1, 2)");
    const auto n = static_cast<Eigen::Index>(g.cells());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
    accumulate_shift(d, g, params.alpha, params.r, snapped);
    return integrate(d);
}

AveragedShift averaged_shift(const DyadicGrid& g, const AveragedShiftOptions& opts, bool keep_blocks) {
    if (opts.samples < 1) throw Error("averaged shift: n_samples must be at least 1");
    if (opts.blocks < 1) throw Error("averaged shift: blocks must be at least 1");
    const auto n = static_cast<Eigen::Index>(g.cells());
    const int nb = std::min(opts.blocks, opts.samples);
    std::vector<Eigen::MatrixXd> sums(static_cast<std::size_t>(nb));
    std::vector<int> counts(static_cast<std::size_t>(nb));
    auto block = [&](int b) {
        const int s0 = static_cast<int>(static_cast<long long>(opts.samples) * b / nb);
        const int s1 = static_cast<int>(static_cast<long long>(opts.samples) * (b + 1) / nb);
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int s = s0; s < s1; ++s) {
            double alpha = 0.0, r = 1.0;
            if (!opts.force_standard) {
                Rng rng(Rng::derive(opts.seed, static_cast<std::uint64_t>(s)));
                r = std::exp2(rng.uniform());
                alpha = rng.uniform() * r * g.length();
            }
            accumulate_shift(d, g, alpha, r, opts.snapped);
        }
        sums[static_cast<std::size_t>(b)] = integrate(d);
        counts[static_cast<std::size_t>(b)] = s1 - s0;
    };
    if (opts.parallel)
        kernels::parallel::for_blocks(nb, block);
    else
        kernels::serial::for_blocks(nb, block);

    AveragedShift out;
    out.kernel = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < nb; ++b) out.kernel += sums[static_cast<std::size_t>(b)];
    out.kernel /= static_cast<double>(opts.samples);
    out.block_samples = counts;
    if (keep_blocks)
        for (int b = 0; b < nb; ++b)
            out.block_kernels.push_back(sums[static_cast<std::size_t>(b)] / counts[static_cast<std::size_t>(b)]);
    return out;
}

LinOp hilbert_averaged(const DyadicGrid& g, const AveragedShiftOptions& opts) {
    auto avg = averaged_shift(g, opts);
    return LinOp::from_action_matrix(g, "hilbert-avg:" + std::to_string(opts.samples) + ":" + std::to_string(opts.seed),
                                     g.cell_width() * avg.kernel);
}

LinOp hilbert_averaged(const DyadicGrid& g, int n_samples, std::uint64_t seed) {
    AveragedShiftOptions o;
    o.samples = n_samples;
    o.seed = seed;
    return hilbert_averaged(g, o);
}

namespace {

template <typename Ref>
KernelFit fit_against(const Eigen::MatrixXd& k, Ref ref) {
    const Eigen::Index n = k.rows();
    double sk = 0, sr = 0, skk = 0, srr = 0, skr = 0;
    double cnt = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double a = k(i, j), b = ref(i, j);
            sk += a;
            sr += b;
            skk += a * a;
            srr += b * b;
            skr += a * b;
            cnt += 1;
        }
    KernelFit f;
    if (cnt == 0) return f;
    const double cov = skr - sk * sr / cnt;
    const double vk = skk - sk * sk / cnt, vr = srr - sr * sr / cnt;
    f.correlation = (vk > 0 && vr > 0) ? cov / std::sqrt(vk * vr) : 0.0;
    f.c = srr > 0 ? skr / srr : 0.0;
    const double res2 = skk - 2 * f.c * skr + f.c * f.c * srr;
    f.residual = skk > 0 ? std::sqrt(std::max(0.0, res2) / skk) : 0.0;
    return f;
}

}  // namespace

KernelFit fit_midpoint_kernel(const Eigen::MatrixXd& kernel, const DyadicGrid& g) {
    const double h = g.cell_width();
    return fit_against(kernel, [h](Eigen::Index i, Eigen::Index j) { return -1.0 / (static_cast<double>(i - j) * h); });
}

KernelFit fit_cell_kernel(const Eigen::MatrixXd& kernel, const DyadicGrid& g) {
    const double h = g.cell_width();
    const auto n = static_cast<std::int64_t>(g.cells());
    std::vector<double> psi(static_cast<std::size_t>(2 * n - 1));
    for (std::int64_t m = -(n - 1); m <= n - 1; ++m) psi[static_cast<std::size_t>(m + n - 1)] = cell_pair_kernel(m);
    return fit_against(kernel, [&psi, h, n](Eigen::Index i, Eigen::Index j) {
        return -psi[static_cast<std::size_t>(i - j + n - 1)] / h;
    });
}

}  // namespace dyadic
