#include "ffpack/fit_index.hpp"

#include <algorithm>
#include <string>

namespace ffpack {

namespace {
std::int64_t round_up_pow2(std::int64_t n) {
    std::int64_t p = 2;
    while (p < n) p *= 2;
    return p;
}
}  // namespace

FitIndex::FitIndex(std::int64_t initial_capacity) {
    rebuild(round_up_pow2(std::max<std::int64_t>(initial_capacity, 2)));
}

void FitIndex::rebuild(std::int64_t new_capacity) {
    capacity_ = new_capacity;
    occupied_.resize(static_cast<std::size_t>(capacity_), 0);
    nodes_.assign(static_cast<std::size_t>(2 * capacity_), Node{});
    for (std::int64_t c = 0; c < capacity_; ++c) {
        const std::int32_t free = occupied_[static_cast<std::size_t>(c)] ? 0 : 1;
        nodes_[static_cast<std::size_t>(capacity_ + c)] = Node{free, free, free};
    }
    std::int64_t width = 2;
    for (std::size_t node = static_cast<std::size_t>(capacity_) - 1; node >= 1; --node) {
        pull(node, width);
        if ((node & (node - 1)) == 0) width *= 2;  // next level up
    }
}

void FitIndex::pull(std::size_t node, std::int64_t width) {
    ++touches_;
    const Node& l = nodes_[2 * node];
    const Node& r = nodes_[2 * node + 1];
    const auto half = static_cast<std::int32_t>(width / 2);
    Node& n = nodes_[node];
    n.best = std::max({l.best, r.best, l.suffix + r.prefix});
    n.prefix = (l.prefix == half) ? half + r.prefix : l.prefix;
    n.suffix = (r.suffix == half) ? half + l.suffix : r.suffix;
}

void FitIndex::update_cell(std::int64_t cell, bool occupied) {
    occupied_[static_cast<std::size_t>(cell)] = occupied ? 1 : 0;
    const std::int32_t free = occupied ? 0 : 1;
    std::size_t node = static_cast<std::size_t>(capacity_ + cell);
    nodes_[node] = Node{free, free, free};
    ++touches_;
    std::int64_t width = 2;
    for (node /= 2; node >= 1; node /= 2, width *= 2) pull(node, width);
}

void FitIndex::reserve(std::int64_t cells) {
    if (cells > capacity_) rebuild(round_up_pow2(cells));
}

void FitIndex::set_occupied(std::int64_t start, std::int64_t length) {
    if (start < 0 || length < 1) throw ContractViolation("set_occupied: bad range");
    reserve(start + length + 2);
    for (std::int64_t c = start; c < start + length; ++c)
        if (occupied_[static_cast<std::size_t>(c)])
            throw ContractViolation("set_occupied: cell " + std::to_string(c) +
                                    " already occupied");
    for (std::int64_t c = start; c < start + length; ++c) update_cell(c, true);
    high_water_ = std::max(high_water_, start + length);
}

void FitIndex::set_free(std::int64_t start, std::int64_t length) {
    if (start < 0 || length < 1 || start + length > capacity_)
        throw ContractViolation("set_free: bad range");
    for (std::int64_t c = start; c < start + length; ++c)
        if (!occupied_[static_cast<std::size_t>(c)])
            throw ContractViolation("set_free: cell " + std::to_string(c) + " already free");
    for (std::int64_t c = start; c < start + length; ++c) update_cell(c, false);
}

std::int64_t FitIndex::leftmost_fit(std::int64_t width) {
    if (width < 1) throw ContractViolation("leftmost_fit: width must be at least 1");
    while (nodes_[1].best < width) reserve(capacity_ * 2 + 2);

    // Descend preferring, in order: a fit inside the left child, a fit
    // straddling the split point, a fit inside the right child.
    std::size_t node = 1;
    std::int64_t node_width = capacity_;
    std::int64_t offset = 0;
    while (node_width > 1) {
        ++touches_;
        const Node& l = nodes_[2 * node];
        const Node& r = nodes_[2 * node + 1];
        const std::int64_t half = node_width / 2;
        if (l.best >= width) {
            node = 2 * node;
        } else if (l.suffix + r.prefix >= width) {
            return offset + half - l.suffix;
        } else {
            node = 2 * node + 1;
            offset += half;
        }
        node_width = half;
    }
    return offset;
}

std::int64_t naive_leftmost_fit(const std::vector<char>& occupied, std::int64_t width) {
    std::int64_t run = 0;
    const auto n = static_cast<std::int64_t>(occupied.size());
    for (std::int64_t c = 0; c < n; ++c) {
        if (occupied[static_cast<std::size_t>(c)]) {
            run = 0;
        } else {
            ++run;
            if (run == width) return c - width + 1;
        }
    }
    return n - run;  // extends into the all-free tail
}

}  // namespace ffpack
