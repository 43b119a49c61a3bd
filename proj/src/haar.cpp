#include "dyadic/haar.hpp"

#include <cmath>

namespace dyadic {

std::vector<double> inv_sqrt_lengths(const DyadicGrid& g) {
    std::vector<double> out(static_cast<std::size_t>(g.depth()) + 1);
    for (int l = 0; l <= g.depth(); ++l) out[l] = 1.0 / std::sqrt(g.node_length({l, 0}));
    return out;
}

double HaarCoefficients::energy() const {
    double s = grid.length() * root_avg * root_avg;
    for (double c : coeffs.raw()) s += c * c;
    return s;
}

HaarCoefficients haar_analysis(const StepFunction& f) {
    const auto& g = f.grid();
    HaarCoefficients out(g);
    const auto avg = node_averages(f);
    for (int l = 0; l < g.depth(); ++l) {
        // <f,h_I> = |I|^{1/2}/2 * (<f>_{I+} - <f>_{I-})
        const double s = 0.5 * std::sqrt(g.node_length({l, 0}));
        const std::size_t first = (std::size_t{1} << l) - 1;
        for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) {
            const std::size_t p = first + k;
            out.coeffs.at_flat(p) = s * (avg.at_flat(2 * p + 2) - avg.at_flat(2 * p + 1));
        }
    }
    out.root_avg = avg.at_flat(0);
    return out;
}

StepFunction haar_synthesis(const HaarCoefficients& c) {
    const auto& g = c.grid;
    const auto inv = inv_sqrt_lengths(g);
    std::vector<double> cur{c.root_avg}, next;
    for (int l = 0; l < g.depth(); ++l) {
        next.resize(cur.size() * 2);
        const std::size_t first = (std::size_t{1} << l) - 1;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            const double d = c.coeffs.at_flat(first + k) * inv[l];
            next[2 * k] = cur[k] - d;
            next[2 * k + 1] = cur[k] + d;
        }
        cur.swap(next);
    }
    return StepFunction(g, std::move(cur));
}

StepFunction haar_synthesis(const HaarCoefficients& c, const DyadicGrid& target) {
    require_same_grid(c.grid, target);
    return haar_synthesis(c);
}

StepFunction haar_function(const DyadicGrid& g, NodeId node) {
    if (!g.is_internal(node)) throw Error("haar_function: node " + node.to_string() + " has no children");
    std::vector<double> v(g.cells(), 0.0);
    const double a = 1.0 / std::sqrt(g.node_length(node));
    const std::size_t b = g.first_cell(node), e = g.end_cell(node), m = (b + e) / 2;
    for (std::size_t i = b; i < m; ++i) v[i] = -a;
    for (std::size_t i = m; i < e; ++i) v[i] = a;
    return StepFunction(g, std::move(v));
}

}  // namespace dyadic
