#include "dyadic/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dyadic::kernels {

namespace {

void check_toeplitz(std::span<const double> t, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size() || t.size() + 1 != 2 * x.size())
        throw std::invalid_argument("toeplitz_apply: size mismatch");
}

std::vector<double> reversed(std::span<const double> t) { return {t.rbegin(), t.rend()}; }

// Four fixed lanes, combined in a fixed order: vectorizes without reassociating,
// so serial and parallel callers produce identical bits.
double dot_row(const double* r, const double* x, std::size_t n) {
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
        for (int k = 0; k < 4; ++k) s[k] += r[j + k] * x[j + k];
    for (; j < n; ++j) s[0] += r[j] * x[j];
    return (s[0] + s[1]) + (s[2] + s[3]);
}

void oscillation_level(std::span<const double> cells, int depth, int level, std::size_t k, double* out) {
    const std::size_t w = std::size_t{1} << (depth - level);
    const double* c = cells.data() + k * w;
    double m = 0.0;
    for (std::size_t i = 0; i < w; ++i) m += c[i];
    m /= static_cast<double>(w);
    double s = 0.0;
    for (std::size_t i = 0; i < w; ++i) s += std::abs(c[i] - m);
    out[(std::size_t{1} << level) - 1 + k] = s / static_cast<double>(w);
}

}  // namespace

namespace serial {

void toeplitz_apply(std::span<const double> t, std::span<const double> x, std::span<double> y) {
    check_toeplitz(t, x, y);
    const std::size_t n = x.size();
    const auto r = reversed(t);
    for (std::size_t i = 0; i < n; ++i) y[i] = dot_row(r.data() + (n - 1 - i), x.data(), n);
}

void materialize(std::size_t n, const ColumnFn& column, double* out) {
    for (std::size_t j = 0; j < n; ++j) column(j, out + j * n);
}

std::vector<double> mean_oscillation(std::span<const double> cells, int depth) {
    std::vector<double> out((std::size_t{2} << depth) - 1, 0.0);
    for (int l = 0; l <= depth; ++l)
        for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) oscillation_level(cells, depth, l, k, out.data());
    return out;
}

void for_blocks(int n, const std::function<void(int)>& fn) {
    for (int b = 0; b < n; ++b) fn(b);
}

}  // namespace serial

namespace parallel {

void toeplitz_apply(std::span<const double> t, std::span<const double> x, std::span<double> y) {
    check_toeplitz(t, x, y);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    // Row i reads t[i+n-1-j]; reversing makes it a contiguous dot product.
    const auto r = reversed(t);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = dot_row(r.data() + (n - 1 - i), x.data(), static_cast<std::size_t>(n));
}

void materialize(std::size_t n, const ColumnFn& column, double* out) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < nn; ++j) column(static_cast<std::size_t>(j), out + j * nn);
}

std::vector<double> mean_oscillation(std::span<const double> cells, int depth) {
    std::vector<double> out((std::size_t{2} << depth) - 1, 0.0);
    for (int l = 0; l <= depth; ++l) {
        const auto count = static_cast<std::ptrdiff_t>(std::size_t{1} << l);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k)
            oscillation_level(cells, depth, l, static_cast<std::size_t>(k), out.data());
    }
    return out;
}

void for_blocks(int n, const std::function<void(int)>& fn) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int b = 0; b < n; ++b) fn(b);
}

}  // namespace parallel

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dyadic::kernels
