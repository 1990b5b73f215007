#pragma once

#include <cstdint>
#include <vector>

#include "ffpack/model.hpp"

namespace ffpack {

// Segment tree over the occupancy lattice answering "leftmost run of free
// cells of a given width" in O(log capacity).  Each node summarises its
// segment by the longest free run, the free prefix length and the free
// suffix length.  Capacity doubles on demand and always exceeds the
// rightmost occupied cell by at least two, so a width-2 query can land past
// the last item without a special case.
class FitIndex {
public:
    explicit FitIndex(std::int64_t initial_capacity = 16);

    std::int64_t leftmost_fit(std::int64_t width);

    // Marks cells [start, start+length) occupied.  Any cell already
    // occupied is a fatal contract violation.
    void set_occupied(std::int64_t start, std::int64_t length);

    // Frees cells [start, start+length); freeing a free cell is fatal.
    void set_free(std::int64_t start, std::int64_t length);

    bool cell_occupied(std::int64_t cell) const {
        return cell >= 0 && cell < capacity_ && occupied_[static_cast<std::size_t>(cell)] != 0;
    }

    std::int64_t capacity() const { return capacity_; }
    void reserve(std::int64_t cells);

    // Number of tree nodes visited since the last reset.  Lets tests pin
    // the per-operation cost to O(log capacity).
    std::uint64_t touch_count() const { return touches_; }
    void reset_touch_count() { touches_ = 0; }

private:
    struct Node {
        std::int32_t best = 0;
        std::int32_t prefix = 0;
        std::int32_t suffix = 0;
    };

    void rebuild(std::int64_t new_capacity);
    void update_cell(std::int64_t cell, bool occupied);
    void pull(std::size_t node, std::int64_t width);

    std::int64_t capacity_ = 0;
    std::int64_t high_water_ = 0;  // one past the rightmost cell ever occupied
    std::vector<Node> nodes_;      // 1-based heap layout, leaves at [capacity_, 2*capacity_)
    std::vector<char> occupied_;
    std::uint64_t touches_ = 0;
};

// Reference answer computed by a direct scan of an occupancy bitmap; cells
// beyond the vector are free.
std::int64_t naive_leftmost_fit(const std::vector<char>& occupied, std::int64_t width);

}  // namespace ffpack
