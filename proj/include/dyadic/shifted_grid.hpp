#pragma once

#include <vector>

#include "dyadic/grid.hpp"

namespace dyadic {

/// Translation alpha and dilation r of the standard tree over the base interval.
struct ShiftedGridParams {
    double alpha = 0.0;
    double r = 1.0;
};

/// One interval base_start + alpha + r*[k 2^-j, (k+1) 2^-j)*base_length, with its snapped cell range.
struct ShiftedNode {
    int level = 0;
    std::int64_t index = 0;
    double left = 0.0;
    double length = 0.0;
    std::size_t first_cell = 0;  // snapped to the nearest lattice points
    std::size_t end_cell = 0;
    double snap_displacement = 0.0;  // largest endpoint move caused by snapping
};

/// Nodes of the shifted tree lying fully inside the base, levels 0..max_level (default: base depth).
/// Nodes whose snapped range is empty are dropped.
std::vector<ShiftedNode> shifted_grid(const ShiftedGridParams& params, const DyadicGrid& base, int max_level = -1);

}  // namespace dyadic
