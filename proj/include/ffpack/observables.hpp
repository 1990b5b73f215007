#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ffpack/model.hpp"

namespace ffpack {

// Observation window for a configuration under parameters (r, p1):
//
//   [0, y*r)            main window: item counts, occupied space, odd holes
//   [0, p1*r)           inner window: odd-hole count g1
//   [(p1+delta)*r, y*r) sub window: odd-hole count g_sub and the odd-hole
//                       pair counts, one per entry of i_caps
//   [0, (p1+2*p2)*r)    full window: wasted (empty) cells
//
// Real boundaries are resolved to integer cells with floor for right edges
// and ceil for left edges, after snapping away float noise, so "completely
// inside" stays exact integer arithmetic.
struct WindowSpec {
    static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

    double y = 1.0;
    double delta = 0.0;
    std::vector<std::int64_t> i_caps = {1, 2, 4, 8, kUnbounded};

    void validate(const ModelParams& params) const;
};

struct WindowCells {
    std::int64_t window_end = 0;  // floor(y*r)
    std::int64_t inner_end = 0;   // floor(p1*r)
    std::int64_t sub_start = 0;   // ceil((p1+delta)*r)
    std::int64_t full_end = 0;    // floor((p1+2*p2)*r)

    static WindowCells resolve(const ModelParams& params, const WindowSpec& window);
};

std::int64_t cell_floor(double x);
std::int64_t cell_ceil(double x);

struct ObservableSnapshot {
    std::int64_t ones_in_window = 0;   // 1-items completely in [0, y*r)
    std::int64_t twos_in_window = 0;   // 2-items completely in [0, y*r)
    std::int64_t occupied = 0;         // occupied cells in [0, y*r)
    std::int64_t spare_pairs = 0;      // 2-items that would fit in the empty space of [0, y*r)
    std::int64_t odd_holes = 0;        // odd-length holes completely in [0, y*r)
    std::int64_t odd_holes_inner = 0;  // same, in [0, p1*r)
    std::int64_t odd_holes_sub = 0;    // same, in [(p1+delta)*r, y*r)
    std::vector<std::int64_t> pair_counts;  // aligned with WindowSpec::i_caps
    std::int64_t wasted = 0;           // empty cells in [0, (p1+2*p2)*r)
    bool inner_all_even = false;       // odd_holes_inner == 0
    bool spare_without_odd = false;    // odd_holes == 0 && spare_pairs > 0
};

// Single pass over the hole map; every derived quantity is cross-checked
// in-place (window accounting, pair parity, the cap bound on pair counts).
ObservableSnapshot snapshot_observables(const Configuration& config, const ModelParams& params,
                                        const WindowSpec& window);

// Pairs of odd-length holes completely inside [a, b) such that the right
// hole has length exactly 1, the span between the holes carries only
// 2-items and even-length holes, and the span is at most 2*cap cells long.
// Qualifying holes are necessarily consecutive odd holes.
std::int64_t count_odd_pairs(const Configuration& config, std::int64_t a, std::int64_t b,
                             std::int64_t cap);

// Empty cells below (p1 + 2*p2) * r.
std::int64_t wasted_space(const Configuration& config, const ModelParams& params);

// Item-count profiles x -> F_t(r*x)/r on a regular grid covering
// [0, rightmost_extent/r + grid_step].
struct RescaledProfile {
    std::vector<double> x;
    std::vector<double> f1;
    std::vector<double> f2;
};

RescaledProfile rescaled_profile(const Configuration& config, double r, double grid_step);

}  // namespace ffpack
