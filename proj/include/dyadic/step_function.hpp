#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dyadic/grid.hpp"

namespace dyadic {

/// A function constant on the finest cells of a grid, stored as its exact cell averages.
class StepFunction {
public:
    explicit StepFunction(const DyadicGrid& grid);
    StepFunction(const DyadicGrid& grid, std::vector<double> values);

    static StepFunction constant(const DyadicGrid& grid, double c);
    /// chi_I for a node I.
    static StepFunction indicator(const DyadicGrid& grid, NodeId node);

    const DyadicGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    /// Moves the cell values out; the function is left empty.
    std::vector<double> release() && { return std::move(values_); }

    StepFunction& operator+=(const StepFunction& o);
    StepFunction& operator-=(const StepFunction& o);
    StepFunction& operator*=(double s);

    friend StepFunction operator+(StepFunction a, const StepFunction& b) { return a += b; }
    friend StepFunction operator-(StepFunction a, const StepFunction& b) { return a -= b; }
    friend StepFunction operator*(double s, StepFunction a) { return a *= s; }
    friend StepFunction operator*(StepFunction a, double s) { return a *= s; }
    friend StepFunction operator-(StepFunction a) { return a *= -1.0; }

    /// Cellwise product.
    StepFunction times(const StepFunction& o) const;

private:
    DyadicGrid grid_;
    std::vector<double> values_;
};

void require_same_grid(const DyadicGrid& a, const DyadicGrid& b);

/// Mean of f over node I.
double average(const StepFunction& f, NodeId node);

/// Averages over every node, computed bottom-up by pairwise midpoints.
NodeArray<double> node_averages(const StepFunction& f);

double inner(const StepFunction& f, const StepFunction& g);
double norm_l2(const StepFunction& f);
double integral(const StepFunction& f);
double max_abs(const StepFunction& f);

/// Largest |f_i - g_i| over cells, divided by max(max|f|, max|g|, tiny).
double max_relative_difference(const StepFunction& f, const StepFunction& g);

/// CSV with one row per finest cell: cell_index,cell_left,cell_avg.
void write_csv(std::ostream& os, const StepFunction& f);
StepFunction read_csv(std::istream& is, const DyadicGrid& grid);

}  // namespace dyadic
