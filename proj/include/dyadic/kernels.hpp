#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Hot loops, each in a plain serial version and an OpenMP version. The parallel
// versions keep the per-element reduction order of the serial ones, so results do
// not depend on the thread count.
namespace dyadic::kernels {

/// Fills column `col` (length n) of a column-major matrix.
using ColumnFn = std::function<void(std::size_t col, double* out)>;

namespace serial {

/// y_i = sum_j t[i - j + n - 1] x_j for a Toeplitz kernel t of length 2n-1.
void toeplitz_apply(std::span<const double> t, std::span<const double> x, std::span<double> y);

/// Column-major n x n matrix built column by column.
void materialize(std::size_t n, const ColumnFn& column, double* out);

/// Mean oscillation (1/|I|) int_I |b - <b>_I| for every node, heap order; cells has 2^depth entries.
std::vector<double> mean_oscillation(std::span<const double> cells, int depth);

/// Runs fn(0..n-1) in order.
void for_blocks(int n, const std::function<void(int)>& fn);

}  // namespace serial

namespace parallel {

void toeplitz_apply(std::span<const double> t, std::span<const double> x, std::span<double> y);
void materialize(std::size_t n, const ColumnFn& column, double* out);
std::vector<double> mean_oscillation(std::span<const double> cells, int depth);
void for_blocks(int n, const std::function<void(int)>& fn);

}  // namespace parallel

/// Number of OpenMP threads in use (1 when built without OpenMP).
int thread_count();

}  // namespace dyadic::kernels
