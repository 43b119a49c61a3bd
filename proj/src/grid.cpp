#include "dyadic/grid.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace dyadic {

NodeId NodeId::from_flat(std::size_t flat) {
    const int level = std::bit_width(flat + 1) - 1;
    return {level, static_cast<std::int64_t>(flat + 1 - (std::size_t{1} << level))};
}

std::string NodeId::to_string() const {
    return "(" + std::to_string(level) + "," + std::to_string(index) + ")";
}

DyadicGrid::DyadicGrid(double start, double length, int depth)
    : start_(start), length_(length), depth_(depth) {
    if (!std::isfinite(start) || !std::isfinite(length) || !(length > 0.0))
        throw Error("grid: base interval must be finite with positive length");
    if (depth < 1 || depth > kMaxDepth)
        throw Error("grid: depth must lie in [1, " + std::to_string(kMaxDepth) + "]");
}

bool DyadicGrid::contains(NodeId n) const {
    return n.level >= 0 && n.level <= depth_ && n.index >= 0 && n.index < (std::int64_t{1} << n.level);
}

void DyadicGrid::require(NodeId n) const {
    if (!contains(n)) throw Error("node " + n.to_string() + " is not on grid " + to_string());
}

std::string DyadicGrid::to_string() const {
    std::ostringstream os;
    os << "[" << start_ << "," << start_ + length_ << ")@" << depth_;
    return os.str();
}

}  // namespace dyadic
