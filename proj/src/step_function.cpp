#include "dyadic/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace dyadic {

StepFunction::StepFunction(const DyadicGrid& grid) : grid_(grid), values_(grid.cells(), 0.0) {}

StepFunction::StepFunction(const DyadicGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.cells())
        throw Error("step function: expected " + std::to_string(grid_.cells()) + " cell values, got " +
                    std::to_string(values_.size()));
}

StepFunction StepFunction::constant(const DyadicGrid& grid, double c) {
    return StepFunction(grid, std::vector<double>(grid.cells(), c));
}

StepFunction StepFunction::indicator(const DyadicGrid& grid, NodeId node) {
    grid.require(node);
    std::vector<double> v(grid.cells(), 0.0);
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(grid.first_cell(node)),
              v.begin() + static_cast<std::ptrdiff_t>(grid.end_cell(node)), 1.0);
    return StepFunction(grid, std::move(v));
}

void require_same_grid(const DyadicGrid& a, const DyadicGrid& b) {
    if (!(a == b)) throw GridMismatch();
}

StepFunction& StepFunction::operator+=(const StepFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

StepFunction& StepFunction::operator-=(const StepFunction& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

StepFunction& StepFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

StepFunction StepFunction::times(const StepFunction& o) const {
    require_same_grid(grid_, o.grid_);
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * o.values_[i];
    return StepFunction(grid_, std::move(v));
}

double average(const StepFunction& f, NodeId node) {
    const auto& g = f.grid();
    g.require(node);
    // Same pairwise reduction order as node_averages so both agree bit for bit.
    std::vector<double> level(f.values().begin() + static_cast<std::ptrdiff_t>(g.first_cell(node)),
                              f.values().begin() + static_cast<std::ptrdiff_t>(g.end_cell(node)));
    while (level.size() > 1) {
        for (std::size_t i = 0; i < level.size() / 2; ++i) level[i] = 0.5 * (level[2 * i] + level[2 * i + 1]);
        level.resize(level.size() / 2);
    }
    return level.front();
}

NodeArray<double> node_averages(const StepFunction& f) {
    const auto& g = f.grid();
    const int L = g.depth();
    NodeArray<double> avg(L);
    const std::size_t leaf0 = g.cells() - 1;
    for (std::size_t i = 0; i < g.cells(); ++i) avg.at_flat(leaf0 + i) = f[i];
    for (int l = L - 1; l >= 0; --l) {
        const std::size_t first = (std::size_t{1} << l) - 1;
        for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) {
            const std::size_t p = first + k;
            avg.at_flat(p) = 0.5 * (avg.at_flat(2 * p + 1) + avg.at_flat(2 * p + 2));
        }
    }
    return avg;
}

double inner(const StepFunction& f, const StepFunction& g) {
    require_same_grid(f.grid(), g.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * f.grid().cell_width();
}

double norm_l2(const StepFunction& f) { return std::sqrt(inner(f, f)); }

double integral(const StepFunction& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().cell_width();
}

double max_abs(const StepFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_relative_difference(const StepFunction& f, const StepFunction& g) {
    require_same_grid(f.grid(), g.grid());
    double diff = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) diff = std::max(diff, std::abs(f[i] - g[i]));
    const double scale = std::max({max_abs(f), max_abs(g), 1e-300});
    return diff / scale;
}

void write_csv(std::ostream& os, const StepFunction& f) {
    os << "cell_index,cell_left,cell_avg\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) os << i << ',' << f.grid().cell_left(i) << ',' << f[i] << '\n';
}

StepFunction read_csv(std::istream& is, const DyadicGrid& grid) {
    std::vector<double> v(grid.cells(), 0.0);
    std::vector<bool> seen(grid.cells(), false);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("cell_index", 0) == 0) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw Error("step function csv: malformed row '" + line + "'");
        const std::size_t idx = std::stoull(a);
        if (idx >= grid.cells() || seen[idx]) throw Error("step function csv: bad cell index " + a);
        seen[idx] = true;
        v[idx] = std::stod(c);
        ++rows;
    }
    if (rows != grid.cells()) throw Error("step function csv: expected " + std::to_string(grid.cells()) + " rows");
    return StepFunction(grid, std::move(v));
}

}  // namespace dyadic
