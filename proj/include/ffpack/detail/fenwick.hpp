#pragma once

#include <cstdint>
#include <vector>

namespace ffpack::detail {

// Binary indexed tree over cell positions 1..capacity, used for
// prefix counts of item end positions.
class Fenwick {
public:
    explicit Fenwick(std::int64_t capacity = 0) { resize(capacity); }

    std::int64_t capacity() const { return capacity_; }

    void resize(std::int64_t new_capacity) {
        if (new_capacity < capacity_) new_capacity = capacity_;
        std::vector<std::int64_t> values(static_cast<std::size_t>(new_capacity) + 1, 0);
        for (std::int64_t pos = 1; pos <= capacity_; ++pos)
            values[static_cast<std::size_t>(pos)] = prefix(pos) - prefix(pos - 1);
        capacity_ = new_capacity;
        tree_.assign(values.size(), 0);
        for (std::int64_t pos = 1; pos <= capacity_; ++pos)
            add(pos, values[static_cast<std::size_t>(pos)]);
    }

    void add(std::int64_t pos, std::int64_t delta) {
        for (; pos <= capacity_; pos += pos & -pos)
            tree_[static_cast<std::size_t>(pos)] += delta;
    }

    // Sum of entries at positions 1..pos; pos beyond capacity is clamped.
    std::int64_t prefix(std::int64_t pos) const {
        if (pos > capacity_) pos = capacity_;
        std::int64_t total = 0;
        for (; pos > 0; pos -= pos & -pos)
            total += tree_[static_cast<std::size_t>(pos)];
        return total;
    }

private:
    std::int64_t capacity_ = 0;
    std::vector<std::int64_t> tree_;
};

}  // namespace ffpack::detail
