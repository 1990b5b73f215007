#include "ffpack/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ffpack {

namespace {
// Snap tolerance for resolving real window edges to cells: boundaries come
// from products like 0.55 * 2000 whose binary representation can land a
// hair on the wrong side of an integer.
constexpr double kEdgeSnap = 1e-7;
}  // namespace

std::int64_t cell_floor(double x) {
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(x + kEdgeSnap)));
}

std::int64_t cell_ceil(double x) {
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(x - kEdgeSnap)));
}

void WindowSpec::validate(const ModelParams& params) const {
    params.validate();
    if (!(y > 0.0)) throw std::invalid_argument("window: y must be positive");
    if (!(delta >= 0.0)) throw std::invalid_argument("window: delta must be non-negative");
    for (std::int64_t cap : i_caps)
        if (cap < 1) throw std::invalid_argument("window: pair caps must be >= 1");
}

WindowCells WindowCells::resolve(const ModelParams& params, const WindowSpec& window) {
    WindowCells cells;
    cells.window_end = cell_floor(window.y * params.r);
    cells.inner_end = cell_floor(params.p1 * params.r);
    cells.sub_start = cell_ceil((params.p1 + window.delta) * params.r);
    cells.full_end = cell_floor((params.p1 + 2.0 * params.p2()) * params.r);
    return cells;
}

namespace {

// Span length of a qualifying odd-hole pair, or -1.  The holes must be
// consecutive odd holes, so the span can only fail on a 1-item or on the
// right hole being wider than one cell.
std::int64_t qualifying_span(const Configuration& config, const Hole& left, const Hole& right) {
    if (right.length != 1) return -1;
    const std::int64_t ones_between =
        config.items_left_of(ItemType::One, right.start) -
        config.items_left_of(ItemType::One, left.end());
    if (ones_between != 0) return -1;
    const std::int64_t span = right.start - left.end();
    if (span % 2 != 0)
        throw ContractViolation("odd-hole pair with an odd span of " + std::to_string(span));
    return span;
}

}  // namespace

ObservableSnapshot snapshot_observables(const Configuration& config, const ModelParams& params,
                                        const WindowSpec& window) {
    window.validate(params);
    const WindowCells cells = WindowCells::resolve(params, window);
    const std::int64_t bound = std::max(cells.window_end, cells.full_end);

    ObservableSnapshot snap;
    snap.ones_in_window = config.items_left_of(ItemType::One, cells.window_end);
    snap.twos_in_window = config.items_left_of(ItemType::Two, cells.window_end);
    snap.pair_counts.assign(window.i_caps.size(), 0);

    std::int64_t empty_main = 0;
    std::int64_t empty_full = 0;
    std::vector<Hole> sub_odd;
    for (const auto& [start, length] : config.hole_map()) {
        if (start >= bound) break;
        const std::int64_t end = start + length;
        const bool odd = length % 2 != 0;
        if (start < cells.window_end) {
            const std::int64_t clipped = std::min(end, cells.window_end) - start;
            empty_main += clipped;
            snap.spare_pairs += clipped / 2;
            if (odd && end <= cells.window_end) {
                ++snap.odd_holes;
                if (start >= cells.sub_start) {
                    ++snap.odd_holes_sub;
                    sub_odd.push_back(Hole{start, length});
                }
            }
        }
        if (odd && end <= cells.inner_end) ++snap.odd_holes_inner;
        if (start < cells.full_end) empty_full += std::min(end, cells.full_end) - start;
    }
    const std::int64_t extent = config.rightmost_extent();
    if (extent < cells.window_end) {
        empty_main += cells.window_end - extent;
        snap.spare_pairs += (cells.window_end - extent) / 2;
    }
    if (extent < cells.full_end) empty_full += cells.full_end - extent;

    snap.occupied = cells.window_end - empty_main;
    snap.wasted = empty_full;
    snap.inner_all_even = snap.odd_holes_inner == 0;
    snap.spare_without_odd = snap.odd_holes == 0 && snap.spare_pairs > 0;

    std::int64_t unbounded_pairs = 0;
    for (std::size_t k = 1; k < sub_odd.size(); ++k) {
        const std::int64_t span = qualifying_span(config, sub_odd[k - 1], sub_odd[k]);
        if (span < 0) continue;
        ++unbounded_pairs;
        for (std::size_t j = 0; j < window.i_caps.size(); ++j)
            if (window.i_caps[j] == WindowSpec::kUnbounded || span / 2 <= window.i_caps[j])
                ++snap.pair_counts[j];
    }

    // Cross-checks between the two derivation routes (prefix counters vs
    // hole map) and the exact structural bounds.
    const std::int64_t contained = snap.ones_in_window + 2 * snap.twos_in_window;
    if (snap.occupied < contained || snap.occupied > contained + 1)
        throw ContractViolation("window occupancy disagrees with contained item cells");
    if (2 * snap.spare_pairs > empty_main)
        throw ContractViolation("spare pair count exceeds empty space");
    if (snap.odd_holes_sub > snap.odd_holes)
        throw ContractViolation("sub-window odd holes exceed window odd holes");
    for (std::size_t j = 0; j < window.i_caps.size(); ++j) {
        const std::int64_t cap = window.i_caps[j];
        if (snap.pair_counts[j] > unbounded_pairs)
            throw ContractViolation("capped pair count exceeds uncapped count");
        if (cap != WindowSpec::kUnbounded &&
            (unbounded_pairs - snap.pair_counts[j]) * 2 * cap > cells.window_end)
            throw ContractViolation("pair counts break the span bound at cap " +
                                    std::to_string(cap));
    }
    if (unbounded_pairs > snap.odd_holes_sub)
        throw ContractViolation("pair count exceeds sub-window odd holes");

    return snap;
}

std::int64_t count_odd_pairs(const Configuration& config, std::int64_t a, std::int64_t b,
                             std::int64_t cap) {
    if (a < 0 || a >= b) throw ContractViolation("count_odd_pairs: need 0 <= a < b");
    if (cap < 1) throw ContractViolation("count_odd_pairs: cap must be >= 1");
    std::vector<Hole> odd;
    for (auto it = config.hole_map().lower_bound(a);
         it != config.hole_map().end() && it->first < b; ++it)
        if (it->second % 2 != 0 && it->first + it->second <= b)
            odd.push_back(Hole{it->first, it->second});
    std::int64_t count = 0;
    for (std::size_t k = 1; k < odd.size(); ++k) {
        const std::int64_t span = qualifying_span(config, odd[k - 1], odd[k]);
        if (span >= 0 && (cap == WindowSpec::kUnbounded || span / 2 <= cap)) ++count;
    }
    return count;
}

std::int64_t wasted_space(const Configuration& config, const ModelParams& params) {
    params.validate();
    return config.empty_cells_below(cell_floor((params.p1 + 2.0 * params.p2()) * params.r));
}

RescaledProfile rescaled_profile(const Configuration& config, double r, double grid_step) {
    if (!(r > 0.0)) throw std::invalid_argument("rescaled_profile: r must be positive");
    if (!(grid_step > 0.0)) throw std::invalid_argument("rescaled_profile: grid step must be positive");
    RescaledProfile profile;
    const double top = static_cast<double>(config.rightmost_extent()) / r + grid_step;
    for (std::int64_t k = 0;; ++k) {
        const double x = static_cast<double>(k) * grid_step;
        if (x > top + kEdgeSnap) break;
        const std::int64_t cell = cell_floor(r * x);
        profile.x.push_back(x);
        profile.f1.push_back(static_cast<double>(config.items_left_of(ItemType::One, cell)) / r);
        profile.f2.push_back(static_cast<double>(config.items_left_of(ItemType::Two, cell)) / r);
    }
    return profile;
}

}  // namespace ffpack
