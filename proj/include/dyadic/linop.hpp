#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dyadic/grid.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic {

/// Largest depth materialized without an explicit override (8192 x 8192).
inline constexpr int kMaxDenseDepth = 13;

/// Matrix-free linear operator on step functions of one grid.
/// Maps cell values to cell values; the adjoint is taken in L^2 of the base interval.
class LinOp {
public:
    using Fn = std::function<std::vector<double>(std::span<const double>)>;

    LinOp(DyadicGrid grid, std::string descriptor, Fn apply, Fn adjoint = {});

    const DyadicGrid& grid() const { return grid_; }
    const std::string& descriptor() const { return descriptor_; }

    StepFunction apply(const StepFunction& f) const;
    std::vector<double> apply(std::span<const double> cells) const;
    StepFunction operator()(const StepFunction& f) const { return apply(f); }

    bool has_adjoint() const { return static_cast<bool>(adjoint_); }
    /// Throws Error when no adjoint was supplied.
    LinOp adjoint() const;

    /// Column j is the image of chi_j / |cell_j|, so apply(f) = |cell| * D * f.
    Eigen::MatrixXd materialize(bool allow_large = false, bool parallel = true) const;
    /// The matrix taking cell values to cell values, |cell| * materialize().
    Eigen::MatrixXd action_matrix(bool allow_large = false) const;

    static LinOp from_action_matrix(const DyadicGrid& g, std::string descriptor, Eigen::MatrixXd m);

private:
    DyadicGrid grid_;
    std::string descriptor_;
    Fn apply_;
    Fn adjoint_;
};

LinOp identity_op(const DyadicGrid& g);
LinOp zero_op(const DyadicGrid& g);
/// A after B.
LinOp compose(const LinOp& a, const LinOp& b);
/// AB - BA.
LinOp commutator(const LinOp& a, const LinOp& b);
LinOp linear_combination(const std::vector<std::pair<double, LinOp>>& terms);
LinOp scaled(double s, const LinOp& a);

/// Largest |(Tf)_i - (h D f)_i| over `trials` random vectors relative to max|Tf|.
double materialization_mismatch(const LinOp& t, const Eigen::MatrixXd& dense, int trials, std::uint64_t seed);

}  // namespace dyadic
