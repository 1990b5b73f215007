#include "ffpack/model.hpp"

#include <algorithm>

namespace ffpack {

void Configuration::ensure_cells(std::int64_t upto) {
    auto needed = static_cast<std::size_t>(upto);
    if (needed <= cells_.size()) return;
    std::size_t grown = std::max(needed, cells_.size() == 0 ? std::size_t{64} : cells_.size() * 2);
    cells_.resize(grown, kNoItem);
    ends_[0].resize(static_cast<std::int64_t>(grown));
    ends_[1].resize(static_cast<std::int64_t>(grown));
}

void Configuration::add_hole(std::int64_t start, std::int64_t length) {
    holes_.emplace(start, length);
    if (length >= 2) wide_holes_.emplace(start, length);
}

void Configuration::drop_hole(std::int64_t start) {
    holes_.erase(start);
    wide_holes_.erase(start);
}

std::int64_t Configuration::leftmost_fit(std::int64_t size) const {
    if (size < 1) throw ContractViolation("leftmost_fit: size must be at least 1");
    if (size == 1) {
        if (!holes_.empty()) return holes_.begin()->first;
        return rightmost_;
    }
    for (const auto& [start, length] : wide_holes_)
        if (length >= size) return start;
    return rightmost_;
}

Configuration::ItemId Configuration::insert_item(ItemType type, std::int64_t start) {
    const std::int64_t size = item_size(type);
    if (start < 0) throw ContractViolation("place: negative start cell");
    ensure_cells(start + size);
    for (std::int64_t c = start; c < start + size; ++c)
        if (cells_[static_cast<std::size_t>(c)] != kNoItem)
            throw ContractViolation("place: cell " + std::to_string(c) + " already occupied");

    const ItemId id = next_id_++;
    items_.emplace(id, Item{id, type, start});
    for (std::int64_t c = start; c < start + size; ++c)
        cells_[static_cast<std::size_t>(c)] = id;
    counts_[static_cast<int>(type)] += 1;
    ends_[static_cast<int>(type)].add(start + size, +1);

    // Hole bookkeeping.  An item is either placed at or beyond the current
    // extent (possibly creating one new hole between the old extent and the
    // item) or it lies completely inside a single existing hole, splitting
    // it in up to two parts.
    if (start >= rightmost_) {
        if (start > rightmost_) add_hole(rightmost_, start - rightmost_);
        rightmost_ = start + size;
    } else {
        auto it = holes_.upper_bound(start);
        if (it == holes_.begin()) throw ContractViolation("place: hole map out of sync");
        --it;
        const std::int64_t hole_start = it->first;
        const std::int64_t hole_end = hole_start + it->second;
        if (start < hole_start || start + size > hole_end)
            throw ContractViolation("place: hole map out of sync");
        drop_hole(hole_start);
        if (start > hole_start) add_hole(hole_start, start - hole_start);
        if (start + size < hole_end) add_hole(start + size, hole_end - (start + size));
    }
    return id;
}

std::pair<Configuration::ItemId, std::int64_t> Configuration::place_first_fit(ItemType type) {
    const std::int64_t start = leftmost_fit(item_size(type));
    return {insert_item(type, start), start};
}

Configuration::ItemId Configuration::place_at(ItemType type, std::int64_t start) {
    return insert_item(type, start);
}

void Configuration::remove_item(ItemId id) {
    auto it = items_.find(id);
    if (it == items_.end())
        throw ContractViolation("remove_item: unknown item id " + std::to_string(id));
    const Item item = it->second;
    items_.erase(it);

    const std::int64_t start = item.start;
    const std::int64_t end = item.end();
    for (std::int64_t c = start; c < end; ++c)
        cells_[static_cast<std::size_t>(c)] = kNoItem;
    counts_[static_cast<int>(item.type)] -= 1;
    ends_[static_cast<int>(item.type)].add(end, -1);

    if (end == rightmost_) {
        // The freed cells join the tail; so does any hole that ended at the
        // item's left edge.
        std::int64_t new_extent = start;
        if (start > 0 && cells_[static_cast<std::size_t>(start - 1)] == kNoItem) {
            auto left = holes_.upper_bound(start - 1);
            --left;
            new_extent = left->first;
            drop_hole(left->first);
        }
        rightmost_ = new_extent;
        return;
    }

    std::int64_t merged_start = start;
    std::int64_t merged_end = end;
    if (start > 0 && cells_[static_cast<std::size_t>(start - 1)] == kNoItem) {
        auto left = holes_.upper_bound(start - 1);
        --left;
        merged_start = left->first;
        drop_hole(left->first);
    }
    if (cells_[static_cast<std::size_t>(end)] == kNoItem) {
        auto right = holes_.find(end);
        if (right == holes_.end()) throw ContractViolation("remove_item: hole map out of sync");
        merged_end = end + right->second;
        drop_hole(end);
    }
    add_hole(merged_start, merged_end - merged_start);
}

std::vector<Hole> Configuration::holes_within(std::int64_t bound) const {
    if (bound < 0) throw ContractViolation("holes_within: negative bound");
    std::vector<Hole> out;
    for (auto it = holes_.begin(); it != holes_.end() && it->first < bound; ++it)
        if (it->first + it->second <= bound)
            out.push_back(Hole{it->first, it->second});
    return out;
}

std::int64_t Configuration::items_left_of(ItemType t, std::int64_t x) const {
    if (x < 0) throw ContractViolation("items_left_of: negative bound");
    return ends_[static_cast<int>(t)].prefix(x);
}

std::int64_t Configuration::empty_cells_below(std::int64_t bound) const {
    if (bound < 0) throw ContractViolation("empty_cells_below: negative bound");
    std::int64_t empty = 0;
    for (auto it = holes_.begin(); it != holes_.end() && it->first < bound; ++it)
        empty += std::min(it->first + it->second, bound) - it->first;
    if (bound > rightmost_) empty += bound - rightmost_;
    return empty;
}

std::int64_t Configuration::occupied_cells_below(std::int64_t bound) const {
    return bound < 0 ? 0 : bound - empty_cells_below(bound);
}

void Configuration::check_invariants() const {
    auto fail = [](const std::string& what) { throw ContractViolation("invariant: " + what); };

    std::int64_t extent = 0;
    std::int64_t counts[2] = {0, 0};
    std::vector<ItemId> rebuilt(cells_.size(), kNoItem);
    for (const auto& [id, item] : items_) {
        if (item.id != id) fail("item id mismatch");
        if (item.start < 0 || item.end() > static_cast<std::int64_t>(rebuilt.size()))
            fail("item outside cell storage");
        for (std::int64_t c = item.start; c < item.end(); ++c) {
            if (rebuilt[static_cast<std::size_t>(c)] != kNoItem) fail("overlapping items");
            rebuilt[static_cast<std::size_t>(c)] = id;
        }
        extent = std::max(extent, item.end());
        counts[static_cast<int>(item.type)] += 1;
    }
    if (rebuilt != cells_) fail("cell map out of sync");
    if (extent != rightmost_) fail("rightmost extent out of sync");
    if (counts[0] != counts_[0] || counts[1] != counts_[1]) fail("item counts out of sync");

    std::map<std::int64_t, std::int64_t> holes;
    std::int64_t run_start = 0;
    for (std::int64_t c = 0; c <= extent; ++c) {
        const bool occupied = c < extent && rebuilt[static_cast<std::size_t>(c)] != kNoItem;
        if (occupied) {
            if (run_start < c) holes.emplace(run_start, c - run_start);
            run_start = c + 1;
        }
    }
    if (holes != holes_) fail("hole map out of sync");
    for (const auto& [start, length] : holes_) {
        const bool wide = wide_holes_.count(start) != 0;
        if (wide != (length >= 2)) fail("wide-hole map out of sync");
        if (wide && wide_holes_.at(start) != length) fail("wide-hole length out of sync");
    }
    if (wide_holes_.size() >
        static_cast<std::size_t>(std::count_if(holes_.begin(), holes_.end(),
                                               [](const auto& h) { return h.second >= 2; })))
        fail("stale wide holes");

    for (int t = 0; t < 2; ++t) {
        std::int64_t direct = 0;
        for (std::int64_t x = 0; x <= extent + 2; ++x) {
            direct = 0;
            for (const auto& [id, item] : items_)
                if (static_cast<int>(item.type) == t && item.end() <= x) ++direct;
            if (direct != ends_[t].prefix(x)) fail("prefix counter out of sync");
        }
    }
}

}  // namespace ffpack
