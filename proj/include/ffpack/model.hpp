#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffpack/detail/fenwick.hpp"

namespace ffpack {

// Thrown when a caller breaks an operation's contract (removing an unknown
// item, double-occupying a cell, ...).  Never caught inside the library.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

enum class ItemType : std::uint8_t { One = 0, Two = 1 };

constexpr std::int64_t item_size(ItemType t) {
    return t == ItemType::One ? 1 : 2;
}

constexpr const char* item_type_name(ItemType t) {
    return t == ItemType::One ? "1" : "2";
}

// Arrival rates: type-1 items arrive at rate p1*r, type-2 items at rate
// (1-p1)*r.  Every live item departs after an Exp(1) service time.
struct ModelParams {
    double r = 1.0;
    double p1 = 0.5;

    double p2() const { return 1.0 - p1; }

    void validate() const {
        if (!(r > 0.0)) throw std::invalid_argument("ModelParams: r must be positive");
        if (!(p1 > 0.0) || !(p1 < 1.0))
            throw std::invalid_argument("ModelParams: p1 must lie strictly inside (0, 1)");
    }
};

struct Item {
    std::uint64_t id = 0;
    ItemType type = ItemType::One;
    std::int64_t start = 0;

    std::int64_t size() const { return item_size(type); }
    std::int64_t end() const { return start + size(); }
};

// Maximal empty run bounded by occupied cells (or by the origin on the
// left).  The unbounded empty tail is never a hole.
struct Hole {
    std::int64_t start = 0;
    std::int64_t length = 0;

    std::int64_t end() const { return start + length; }
    bool odd() const { return length % 2 != 0; }

    friend bool operator==(const Hole&, const Hole&) = default;
};

// Set of disjoint items on the integer cells 0, 1, 2, ... plus the derived
// structures needed to answer placement and counting queries quickly:
// a cell -> item map, an ordered map of all holes, and per-type prefix
// counters of item end positions.  All are kept in sync incrementally.
class Configuration {
public:
    using ItemId = std::uint64_t;
    static constexpr ItemId kNoItem = ~ItemId{0};

    // Smallest start s such that cells [s, s+size) are all empty.  A width-2
    // request skips size-1 holes and may land on the first cell past the
    // rightmost item.
    std::int64_t leftmost_fit(std::int64_t size) const;

    // Places a new item of the given type at its first-fit position and
    // returns (id, start).  Ids are assigned sequentially and never reused.
    std::pair<ItemId, std::int64_t> place_first_fit(ItemType type);

    // Places a new item at an explicit position; the cells must be empty.
    ItemId place_at(ItemType type, std::int64_t start);

    void remove_item(ItemId id);

    // Holes lying completely inside [0, bound), sorted by start.  A hole
    // straddling the bound is excluded, as is the empty tail.
    std::vector<Hole> holes_within(std::int64_t bound) const;

    // Number of type-t items contained in [0, x), i.e. with end <= x.
    std::int64_t items_left_of(ItemType t, std::int64_t x) const;

    // Number of occupied cells with index < bound.
    std::int64_t occupied_cells_below(std::int64_t bound) const;

    // Number of empty cells with index < bound (hole cells plus any tail
    // cells below the bound).
    std::int64_t empty_cells_below(std::int64_t bound) const;

    std::int64_t rightmost_extent() const { return rightmost_; }
    std::int64_t item_count() const { return counts_[0] + counts_[1]; }
    std::int64_t item_count(ItemType t) const { return counts_[static_cast<int>(t)]; }
    std::int64_t occupied_cells() const { return counts_[0] + 2 * counts_[1]; }
    ItemId next_item_id() const { return next_id_; }

    bool cell_occupied(std::int64_t cell) const {
        return cell >= 0 && cell < static_cast<std::int64_t>(cells_.size()) &&
               cells_[static_cast<std::size_t>(cell)] != kNoItem;
    }

    // Item covering the cell, or kNoItem.
    ItemId item_at(std::int64_t cell) const {
        if (cell < 0 || cell >= static_cast<std::int64_t>(cells_.size())) return kNoItem;
        return cells_[static_cast<std::size_t>(cell)];
    }

    const Item* find_item(ItemId id) const {
        auto it = items_.find(id);
        return it == items_.end() ? nullptr : &it->second;
    }

    const std::unordered_map<ItemId, Item>& items() const { return items_; }

    // All holes, keyed by start cell.  Exposed for observers that walk the
    // empty structure of a window without rescanning cells.
    const std::map<std::int64_t, std::int64_t>& hole_map() const { return holes_; }

    // Full self-audit against a rebuild from the item list; throws
    // ContractViolation on the first inconsistency.  Test/diagnostic use.
    void check_invariants() const;

private:
    void ensure_cells(std::int64_t upto);
    void add_hole(std::int64_t start, std::int64_t length);
    void drop_hole(std::int64_t start);
    ItemId insert_item(ItemType type, std::int64_t start);

    std::vector<ItemId> cells_;
    std::unordered_map<ItemId, Item> items_;
    std::map<std::int64_t, std::int64_t> holes_;       // start -> length
    std::map<std::int64_t, std::int64_t> wide_holes_;  // subset with length >= 2
    detail::Fenwick ends_[2];
    std::int64_t rightmost_ = 0;
    std::int64_t counts_[2] = {0, 0};
    ItemId next_id_ = 0;
};

}  // namespace ffpack
