#include "dyadic/linop.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic/kernels.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

LinOp::LinOp(DyadicGrid grid, std::string descriptor, Fn apply, Fn adjoint)
    : grid_(grid), descriptor_(std::move(descriptor)), apply_(std::move(apply)), adjoint_(std::move(adjoint)) {
    if (!apply_) throw Error("LinOp " + descriptor_ + ": missing apply");
}

StepFunction LinOp::apply(const StepFunction& f) const {
    require_same_grid(grid_, f.grid());
    return StepFunction(grid_, apply_(f.values()));
}

std::vector<double> LinOp::apply(std::span<const double> cells) const {
    if (cells.size() != grid_.cells()) throw GridMismatch();
    return apply_(cells);
}

LinOp LinOp::adjoint() const {
    if (!adjoint_) throw Error("LinOp " + descriptor_ + ": no adjoint available");
    return LinOp(grid_, "adj(" + descriptor_ + ")", adjoint_, apply_);
}

Eigen::MatrixXd LinOp::materialize(bool allow_large, bool parallel) const {
    if (grid_.depth() > kMaxDenseDepth && !allow_large)
        throw Error("materialize: depth " + std::to_string(grid_.depth()) + " exceeds the dense cap of " +
                    std::to_string(kMaxDenseDepth));
    const std::size_t n = grid_.cells();
    const double inv_h = 1.0 / grid_.cell_width();
    Eigen::MatrixXd m(n, n);
    auto column = [&](std::size_t j, double* out) {
        std::vector<double> e(n, 0.0);
        e[j] = inv_h;
        const auto y = apply_(e);
        std::copy(y.begin(), y.end(), out);
    };
    if (parallel)
        kernels::parallel::materialize(n, column, m.data());
    else
        kernels::serial::materialize(n, column, m.data());
    return m;
}

Eigen::MatrixXd LinOp::action_matrix(bool allow_large) const { return grid_.cell_width() * materialize(allow_large); }

LinOp LinOp::from_action_matrix(const DyadicGrid& g, std::string descriptor, Eigen::MatrixXd m) {
    if (m.rows() != static_cast<Eigen::Index>(g.cells()) || m.cols() != m.rows())
        throw Error("from_action_matrix: matrix does not match grid");
    auto mat = std::make_shared<const Eigen::MatrixXd>(std::move(m));
    auto fwd = [mat](std::span<const double> x) {
        Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::VectorXd y = (*mat) * v;
        return std::vector<double>(y.data(), y.data() + y.size());
    };
    auto adj = [mat](std::span<const double> x) {
        Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::VectorXd y = mat->transpose() * v;
        return std::vector<double>(y.data(), y.data() + y.size());
    };
    return LinOp(g, std::move(descriptor), fwd, adj);
}

LinOp identity_op(const DyadicGrid& g) {
    auto id = [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); };
    return LinOp(g, "I", id, id);
}

LinOp zero_op(const DyadicGrid& g) {
    auto z = [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); };
    return LinOp(g, "0", z, z);
}

LinOp compose(const LinOp& a, const LinOp& b) {
    require_same_grid(a.grid(), b.grid());
    LinOp::Fn adj;
    if (a.has_adjoint() && b.has_adjoint()) {
        adj = [as = a.adjoint(), bs = b.adjoint()](std::span<const double> x) { return bs.apply(as.apply(x)); };
    }
    return LinOp(a.grid(), a.descriptor() + "*" + b.descriptor(),
                 [a, b](std::span<const double> x) { return a.apply(b.apply(x)); }, adj);
}

LinOp commutator(const LinOp& a, const LinOp& b) {
    require_same_grid(a.grid(), b.grid());
    auto comm = [](const LinOp& p, const LinOp& q) {
        return [p, q](std::span<const double> x) {
            auto u = p.apply(q.apply(x));
            const auto v = q.apply(p.apply(x));
            for (std::size_t i = 0; i < u.size(); ++i) u[i] -= v[i];
            return u;
        };
    };
    LinOp::Fn adj;
    // [A,B]* = B*A* - A*B* = [B*, A*]
    if (a.has_adjoint() && b.has_adjoint()) adj = comm(b.adjoint(), a.adjoint());
    return LinOp(a.grid(), "[" + a.descriptor() + "," + b.descriptor() + "]", comm(a, b), adj);
}

LinOp linear_combination(const std::vector<std::pair<double, LinOp>>& terms) {
    if (terms.empty()) throw Error("linear_combination: no terms");
    const auto& g = terms.front().second.grid();
    std::string desc;
    bool all_adj = true;
    for (const auto& [c, op] : terms) {
        require_same_grid(g, op.grid());
        if (!desc.empty()) desc += "+";
        desc += std::to_string(c) + op.descriptor();
        all_adj = all_adj && op.has_adjoint();
    }
    auto combine = [](std::vector<std::pair<double, LinOp>> ts) {
        return [ts = std::move(ts)](std::span<const double> x) {
            std::vector<double> out(x.size(), 0.0);
            for (const auto& [c, op] : ts) {
                const auto y = op.apply(x);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * y[i];
            }
            return out;
        };
    };
    LinOp::Fn adj;
    if (all_adj) {
        std::vector<std::pair<double, LinOp>> adj_terms;
        for (const auto& [c, op] : terms) adj_terms.emplace_back(c, op.adjoint());
        adj = combine(std::move(adj_terms));
    }
    return LinOp(g, desc, combine(terms), adj);
}

LinOp scaled(double s, const LinOp& a) { return linear_combination({{s, a}}); }

double materialization_mismatch(const LinOp& t, const Eigen::MatrixXd& dense, int trials, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(t.grid().cells());
    const double h = t.grid().cell_width();
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
        Eigen::VectorXd f(n);
        for (Eigen::Index i = 0; i < n; ++i) f[i] = rng.normal();
        const auto y = t.apply(std::span<const double>(f.data(), static_cast<std::size_t>(n)));
        const Eigen::VectorXd z = h * (dense * f);
        double diff = 0.0, scale = 1e-300;
        for (Eigen::Index i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(y[i] - z[i]));
            scale = std::max({scale, std::abs(y[i]), std::abs(z[i])});
        }
        worst = std::max(worst, diff / scale);
    }
    return worst;
}

}  // namespace dyadic
