#include "dyadic/shift.hpp"

#include <cmath>

#include "dyadic/haar.hpp"

namespace dyadic {

namespace {

using Cells = std::span<const double>;

HaarCoefficients analyze(const DyadicGrid& g, Cells x) {
    return haar_analysis(StepFunction(g, std::vector<double>(x.begin(), x.end())));
}

std::vector<double> synthesize(const HaarCoefficients& c) { return std::move(haar_synthesis(c)).release(); }

// Flat index range of nodes at levels 0..depth-2.
std::size_t shift_nodes(const DyadicGrid& g) { return g.depth() >= 2 ? (std::size_t{1} << (g.depth() - 1)) - 1 : 0; }

std::vector<double> half_differences(const StepFunction& b) {
    // Delta_I b for every internal node, flat order.
    const auto avg = node_averages(b);
    std::vector<double> d(b.grid().internal_count());
    for (std::size_t p = 0; p < d.size(); ++p) d[p] = 0.5 * (avg.at_flat(2 * p + 2) - avg.at_flat(2 * p + 1));
    return d;
}

}  // namespace

LinOp shift_S(const DyadicGrid& g) {
    auto fwd = [g](Cells x) {
        const auto c = analyze(g, x);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p) {
            out.coeffs.at_flat(2 * p + 1) += c.coeffs.at_flat(p);
            out.coeffs.at_flat(2 * p + 2) -= c.coeffs.at_flat(p);
        }
        return synthesize(out);
    };
    auto adj = [g](Cells x) {
        const auto c = analyze(g, x);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p)
            out.coeffs.at_flat(p) = c.coeffs.at_flat(2 * p + 1) - c.coeffs.at_flat(2 * p + 2);
        return synthesize(out);
    };
    return LinOp(g, "S", fwd, adj);
}

LinOp shift_S_adjoint(const DyadicGrid& g) {
    auto s = shift_S(g).adjoint();
    return LinOp(g, "S*", [s](Cells x) { return s.apply(x); }, [s](Cells x) { return s.adjoint().apply(x); });
}

LinOp paraproduct(const StepFunction& b) {
    const auto& g = b.grid();
    const auto bc = haar_analysis(b);
    auto fwd = [g, bc](Cells x) {
        const auto avg = node_averages(StepFunction(g, std::vector<double>(x.begin(), x.end())));
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < g.internal_count(); ++p) out.coeffs.at_flat(p) = bc.coeffs.at_flat(p) * avg.at_flat(p);
        return synthesize(out);
    };
    auto adj = [g, bc](Cells x) {
        const auto c = analyze(g, x);
        // Push b_I f_I / |I| down the tree to the cells.
        std::vector<double> acc(g.node_count(), 0.0);
        for (std::size_t p = 0; p < g.internal_count(); ++p) {
            const double len = g.node_length(NodeId::from_flat(p));
            const double v = acc[p] + bc.coeffs.at_flat(p) * c.coeffs.at_flat(p) / len;
            acc[2 * p + 1] = v;
            acc[2 * p + 2] = v;
        }
        return std::vector<double>(acc.begin() + static_cast<std::ptrdiff_t>(g.internal_count()), acc.end());
    };
    return LinOp(g, "pi_b", fwd, adj);
}

LinOp paraproduct_adjoint(const StepFunction& b) {
    const auto p = paraproduct(b);
    const auto pa = p.adjoint();
    return LinOp(b.grid(), "pi*_b", [pa](Cells x) { return pa.apply(x); }, [p](Cells x) { return p.apply(x); });
}

LinOp lambda_op(const StepFunction& b) {
    const auto& g = b.grid();
    const auto avg = node_averages(b);
    auto fwd = [g, avg](Cells x) {
        auto c = analyze(g, x);
        for (std::size_t p = 0; p < g.internal_count(); ++p) c.coeffs.at_flat(p) *= avg.at_flat(p);
        c.root_avg = 0.0;
        return synthesize(c);
    };
    return LinOp(g, "lambda_b", fwd, fwd);
}

LinOp mult_op(const StepFunction& b) {
    auto fwd = [bv = std::vector<double>(b.values().begin(), b.values().end())](Cells x) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = bv[i] * x[i];
        return y;
    };
    return LinOp(b.grid(), "mult_b", fwd, fwd);
}

StepFunction decomposition_root_term(const StepFunction& b, const StepFunction& f) {
    require_same_grid(b.grid(), f.grid());
    return StepFunction::constant(b.grid(), average(b, {0, 0}) * average(f, {0, 0}));
}

LinOp lambda_commutator_closed(const StepFunction& b) {
    const auto& g = b.grid();
    const auto d = half_differences(b);
    auto fwd = [g, d](Cells x) {
        const auto c = analyze(g, x);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p) {
            const double v = -d[p] * c.coeffs.at_flat(p);
            out.coeffs.at_flat(2 * p + 1) += v;
            out.coeffs.at_flat(2 * p + 2) += v;
        }
        return synthesize(out);
    };
    auto adj = [g, d](Cells x) {
        const auto c = analyze(g, x);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p)
            out.coeffs.at_flat(p) = -d[p] * (c.coeffs.at_flat(2 * p + 1) + c.coeffs.at_flat(2 * p + 2));
        return synthesize(out);
    };
    return LinOp(g, "[lambda_b,S]closed", fwd, adj);
}

namespace {

// Shared body of S_b and its truncations: nodes with flat index in `keep`.
LinOp s_b_impl(const StepFunction& b, std::vector<char> keep, std::vector<double> pre, std::string desc) {
    const auto& g = b.grid();
    const auto d = half_differences(b);
    auto fwd = [g, d, keep, pre](Cells x) {
        std::vector<double> y(x.begin(), x.end());
        if (!pre.empty())
            for (std::size_t i = 0; i < y.size(); ++i) y[i] *= pre[i];
        const auto c = analyze(g, y);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p)
            if (keep.empty() || keep[p]) out.coeffs.at_flat(2 * p + 1) += d[p] * c.coeffs.at_flat(p);
        return synthesize(out);
    };
    auto adj = [g, d, keep, pre](Cells x) {
        const auto c = analyze(g, x);
        HaarCoefficients out(g);
        for (std::size_t p = 0; p < shift_nodes(g); ++p)
            if (keep.empty() || keep[p]) out.coeffs.at_flat(p) = d[p] * c.coeffs.at_flat(2 * p + 1);
        auto y = synthesize(out);
        if (!pre.empty())
            for (std::size_t i = 0; i < y.size(); ++i) y[i] *= pre[i];
        return y;
    };
    return LinOp(g, std::move(desc), fwd, adj);
}

}  // namespace

LinOp shift_S_b(const StepFunction& b) { return s_b_impl(b, {}, {}, "S_b"); }

LinOp truncated_S_b(const StepFunction& b, NodeId node, const Weight& w) {
    const auto& g = b.grid();
    g.require(node);
    require_same_grid(g, w.grid());
    std::vector<char> keep(g.internal_count(), 0);
    for_each_node(node.level, g.depth() - 1, [&](NodeId n) {
        const int up = n.level - node.level;
        if ((n.index >> up) == node.index) keep[n.flat()] = 1;
    });
    std::vector<double> pre(w.reciprocal().values().begin(), w.reciprocal().values().end());
    return s_b_impl(b, std::move(keep), std::move(pre), "S^" + node.to_string() + "_{b,w^-1}");
}

}  // namespace dyadic
