#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects that must share a grid do not.
class GridMismatch : public Error {
public:
    GridMismatch() : Error("grid mismatch") {}
};

/// Address of a dyadic subinterval: level 0 is the base interval, level L the finest cells.
struct NodeId {
    int level = 0;
    std::int64_t index = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;

    NodeId parent() const { return {level - 1, index / 2}; }
    NodeId left() const { return {level + 1, 2 * index}; }
    NodeId right() const { return {level + 1, 2 * index + 1}; }
    NodeId sibling() const { return {level, index ^ 1}; }
    bool is_left_child() const { return (index & 1) == 0; }

    /// Position in level-major (heap) order; the root is 0.
    std::size_t flat() const { return (std::size_t{1} << level) - 1 + static_cast<std::size_t>(index); }
    static NodeId from_flat(std::size_t flat);

    std::string to_string() const;
};

/// A finite dyadic tree of the given depth over [start, start + length).
class DyadicGrid {
public:
    static constexpr int kMaxDepth = 24;

    DyadicGrid(double start, double length, int depth);

    double start() const { return start_; }
    double length() const { return length_; }
    double end() const { return start_ + length_; }
    int depth() const { return depth_; }

    std::size_t cells() const { return std::size_t{1} << depth_; }
    std::size_t node_count() const { return (std::size_t{2} << depth_) - 1; }
    /// Nodes with level < depth, i.e. nodes that carry a Haar function.
    std::size_t internal_count() const { return cells() - 1; }
    double cell_width() const { return length_ / static_cast<double>(cells()); }
    double cell_left(std::size_t i) const { return start_ + static_cast<double>(i) * cell_width(); }
    double cell_center(std::size_t i) const { return cell_left(i) + 0.5 * cell_width(); }

    bool contains(NodeId n) const;
    bool is_internal(NodeId n) const { return contains(n) && n.level < depth_; }
    /// Throws Error when the node is not on this tree.
    void require(NodeId n) const;

    double node_length(NodeId n) const { return length_ / static_cast<double>(std::int64_t{1} << n.level); }
    double node_left(NodeId n) const { return start_ + static_cast<double>(n.index) * node_length(n); }
    double node_right(NodeId n) const { return node_left(n) + node_length(n); }

    std::size_t cells_per_node(int level) const { return std::size_t{1} << (depth_ - level); }
    std::size_t first_cell(NodeId n) const { return static_cast<std::size_t>(n.index) * cells_per_node(n.level); }
    std::size_t end_cell(NodeId n) const { return first_cell(n) + cells_per_node(n.level); }

    /// Finest-level node containing cell i.
    NodeId cell_node(std::size_t i) const { return {depth_, static_cast<std::int64_t>(i)}; }

    friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

    std::string to_string() const;

private:
    double start_;
    double length_;
    int depth_;
};

/// Dense per-node storage in heap order for levels 0..max_level.
template <typename T>
class NodeArray {
public:
    NodeArray() = default;
    NodeArray(int max_level, T init = T{})
        : max_level_(max_level), data_((std::size_t{2} << max_level) - 1, init) {}

    int max_level() const { return max_level_; }
    std::size_t size() const { return data_.size(); }

    T& operator[](NodeId n) { return data_[n.flat()]; }
    const T& operator[](NodeId n) const { return data_[n.flat()]; }
    T& at_flat(std::size_t i) { return data_[i]; }
    const T& at_flat(std::size_t i) const { return data_[i]; }

    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

private:
    int max_level_ = -1;
    std::vector<T> data_;
};

/// Calls fn(NodeId) for every node with level in [min_level, max_level], level-major.
template <typename Fn>
void for_each_node(int min_level, int max_level, Fn&& fn) {
    for (int l = min_level; l <= max_level; ++l) {
        const std::int64_t count = std::int64_t{1} << l;
        for (std::int64_t k = 0; k < count; ++k) fn(NodeId{l, k});
    }
}

}  // namespace dyadic
