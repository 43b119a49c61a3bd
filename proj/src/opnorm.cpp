#include "dyadic/opnorm.hpp"

#include <cmath>

#include "dyadic/haar.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> start_vector(const DyadicGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(g.cells(), 1.0);
    for (int l = 0; l < g.depth(); ++l) {
        const NodeId n{l, static_cast<std::int64_t>(rng.below(std::uint64_t{1} << l))};
        const auto h = haar_function(g, n);
        // Scaled to unit sup norm so that every level carries comparable energy.
        const double s = std::sqrt(g.node_length(n));
        for (std::size_t i = g.first_cell(n); i < g.end_cell(n); ++i) x[i] += s * h[i];
    }
    for (double& v : x) v += 1e-3 * rng.normal();
    return x;
}

}  // namespace

NormReport l2w_opnorm(const LinOp& t, const Weight& w, const PowerIterationOptions& opts) {
    require_same_grid(t.grid(), w.grid());
    if (!(opts.tol > 0.0)) throw Error("l2w_opnorm: tol must be positive");
    const auto& g = t.grid();
    const LinOp ta = t.adjoint();
    const std::size_t n = g.cells();
    std::vector<double> sw(n), isw(n);
    for (std::size_t i = 0; i < n; ++i) {
        sw[i] = std::sqrt(w.density()[i]);
        isw[i] = 1.0 / sw[i];
    }
    auto M = [&](const std::vector<double>& x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = isw[i] * x[i];
        y = t.apply(y);
        for (std::size_t i = 0; i < n; ++i) y[i] *= sw[i];
        return y;
    };
    auto Mt = [&](const std::vector<double>& x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = sw[i] * x[i];
        y = ta.apply(y);
        for (std::size_t i = 0; i < n; ++i) y[i] *= isw[i];
        return y;
    };

    NormReport rep{t.descriptor(), w.descriptor(), 0.0, StepFunction(g), 0, false};
    std::vector<double> x = start_vector(g, opts.seed);
    double nx = std::sqrt(dot(x, x));
    for (double& v : x) v /= nx;
    double lambda = -1.0;
    std::vector<double> best = x;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const auto y = M(x);
        const double lam = dot(y, y);  // x has unit norm
        rep.iterations = it;
        best = x;
        if (lam == 0.0) {
            lambda = 0.0;
            rep.converged = true;
            break;
        }
        if (lambda >= 0.0 && std::abs(lam - lambda) <= opts.tol * lam) {
            lambda = lam;
            rep.converged = true;
            break;
        }
        lambda = lam;
        auto z = Mt(y);
        const double nz = std::sqrt(dot(z, z));
        if (nz == 0.0) {
            rep.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / nz;
    }
    rep.norm = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < n; ++i) best[i] *= isw[i];
    rep.witness = StepFunction(g, std::move(best));
    return rep;
}

NormReport l2w_opnorm(const LinOp& t, const Weight& w, double tol, int max_iter, std::uint64_t seed) {
    return l2w_opnorm(t, w, PowerIterationOptions{tol, max_iter, seed});
}

double dense_l2w_norm(const LinOp& t, const Weight& w) {
    require_same_grid(t.grid(), w.grid());
    Eigen::MatrixXd a = t.action_matrix();
    const auto n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sqrt(w.density()[static_cast<std::size_t>(i)]);
        a.row(i) *= s;
        a.col(i) /= s;
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double dense_l2_norm(const LinOp& t) {
    return dense_l2w_norm(t, weight_from_profile(AnalyticProfile::constant(1.0), t.grid()));
}

double lpw_ratio(const LinOp& t, const StepFunction& f, const Weight& w, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw Error("lpw_ratio: p must lie in (1, inf)");
    const double den = norm_lpw(f, w, p);
    if (den == 0.0) throw Error("lpw_ratio: f has zero L^p(w) norm");
    return norm_lpw(t.apply(f), w, p) / den;
}

}  // namespace dyadic
