#include "dyadic/shifted_grid.hpp"

#include <algorithm>
#include <cmath>

namespace dyadic {

std::vector<ShiftedNode> shifted_grid(const ShiftedGridParams& params, const DyadicGrid& base, int max_level) {
    if (!(params.r >= 1.0 && params.r < 2.0)) throw Error("shifted_grid: r must lie in [1, 2)");
    if (!std::isfinite(params.alpha)) throw Error("shifted_grid: alpha must be finite");
    if (max_level < 0) max_level = base.depth();
    const double h = base.cell_width();
    const double lb = base.length();
    const double eps = 1e-12 * lb;
    std::vector<ShiftedNode> out;
    for (int j = 0; j <= max_level; ++j) {
        const double len = params.r * lb / static_cast<double>(std::int64_t{1} << j);
        // Offsets relative to base_start: alpha + k*len must lie in [0, lb - len].
        const auto kmin = static_cast<std::int64_t>(std::ceil((-params.alpha - eps) / len));
        const auto kmax = static_cast<std::int64_t>(std::floor((lb - len - params.alpha + eps) / len));
        for (std::int64_t k = kmin; k <= kmax; ++k) {
            const double lo = params.alpha + static_cast<double>(k) * len;
            const double hi = lo + len;
            const double a = std::clamp(std::round(lo / h), 0.0, static_cast<double>(base.cells()));
            const double b = std::clamp(std::round(hi / h), 0.0, static_cast<double>(base.cells()));
            if (b <= a) continue;
            ShiftedNode n;
            n.level = j;
            n.index = k;
            n.left = base.start() + lo;
            n.length = len;
            n.first_cell = static_cast<std::size_t>(a);
            n.end_cell = static_cast<std::size_t>(b);
            n.snap_displacement = std::max(std::abs(a * h - lo), std::abs(b * h - hi));
            out.push_back(n);
        }
    }
    return out;
}

}  // namespace dyadic
