#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ffpack/engine.hpp"
#include "ffpack/estimator.hpp"
#include "ffpack/observables.hpp"
#include "support/scan_oracle.hpp"

using namespace ffpack;

namespace {

Configuration occupy_cells(std::initializer_list<std::int64_t> cells) {
    Configuration config;
    for (std::int64_t c : cells) config.place_at(ItemType::One, c);
    return config;
}

// 1-items on [0, p1*r), 2-items on [p1*r, (p1+2*p2)*r), no gaps.
Configuration packed_config(const ModelParams& params) {
    Configuration config;
    const auto ones = static_cast<std::int64_t>(std::llround(params.p1 * params.r));
    const auto twos = static_cast<std::int64_t>(std::llround(params.p2() * params.r));
    std::int64_t cell = 0;
    for (std::int64_t k = 0; k < ones; ++k, cell += 1) config.place_at(ItemType::One, cell);
    for (std::int64_t k = 0; k < twos; ++k, cell += 2) config.place_at(ItemType::Two, cell);
    return config;
}

}  // namespace

TEST_CASE("snapshot counts on a small hand construction") {
    // Occupied cells {0,1,3,6,7}, window edge at 9: one odd hole, one even
    // hole, one clipped tail cell.
    const Configuration config = occupy_cells({0, 1, 3, 6, 7});
    const ModelParams params{9.0, 1.0 / 3.0};
    WindowSpec window;
    window.y = 1.0;
    window.delta = 0.0;
    window.i_caps = {1, WindowSpec::kUnbounded};

    const ObservableSnapshot snap = snapshot_observables(config, params, window);
    CHECK(snap.occupied == 5);
    CHECK(snap.odd_holes == 1);
    CHECK(snap.spare_pairs == 1);
    CHECK(snap.ones_in_window == 5);
    CHECK(snap.twos_in_window == 0);
    CHECK_FALSE(snap.spare_without_odd);
}

TEST_CASE("a 2-item straddling the window edge occupies one window cell") {
    Configuration config;
    config.place_at(ItemType::Two, 8);
    const ModelParams params{9.0, 0.5};
    WindowSpec window;
    window.y = 1.0;
    const ObservableSnapshot snap = snapshot_observables(config, params, window);
    CHECK(snap.twos_in_window == 0);
    CHECK(snap.ones_in_window == 0);
    CHECK(snap.occupied == 1);
}

TEST_CASE("spare capacity sums clipped half-runs including the tail") {
    const Configuration config = occupy_cells({0, 1, 3, 6, 7});
    // Empty runs below 9: {2}, {4,5}, tail {8}.
    CHECK(config.empty_cells_below(9) == 4);
    const ModelParams params{9.0, 0.5};
    WindowSpec window;
    window.y = 1.0;
    const ObservableSnapshot snap = snapshot_observables(config, params, window);
    CHECK(snap.spare_pairs == 1);
}

TEST_CASE("odd pair counting follows the span and the cap") {
    // ...1111111111.22221.1 with odd single-cell holes at 10 and 15
    // separated by two 2-items.
    Configuration config;
    for (std::int64_t c = 0; c < 10; ++c) config.place_at(ItemType::One, c);
    config.place_at(ItemType::Two, 11);
    config.place_at(ItemType::Two, 13);
    config.place_at(ItemType::One, 16);

    CHECK(count_odd_pairs(config, 0, 20, WindowSpec::kUnbounded) == 1);
    CHECK(count_odd_pairs(config, 0, 20, 2) == 1);
    CHECK(count_odd_pairs(config, 0, 20, 1) == 0);

    SUBCASE("a 1-item in the span disqualifies the pair") {
        Configuration blocked;
        for (std::int64_t c = 0; c < 10; ++c) blocked.place_at(ItemType::One, c);
        blocked.place_at(ItemType::Two, 11);
        blocked.place_at(ItemType::One, 13);
        blocked.place_at(ItemType::One, 14);
        blocked.place_at(ItemType::One, 16);
        CHECK(count_odd_pairs(blocked, 0, 20, WindowSpec::kUnbounded) == 0);
    }

    SUBCASE("a wide right hole disqualifies the pair") {
        Configuration wide;
        for (std::int64_t c = 0; c < 10; ++c) wide.place_at(ItemType::One, c);
        wide.place_at(ItemType::Two, 11);
        wide.place_at(ItemType::One, 16);  // right hole {13,3}
        CHECK(count_odd_pairs(wide, 0, 20, WindowSpec::kUnbounded) == 0);
    }
}

TEST_CASE("wasted space on reference configurations") {
    SUBCASE("the packed optimum wastes nothing") {
        const ModelParams params{100.0, 0.5};
        CHECK(wasted_space(packed_config(params), params) == 0);
    }
    SUBCASE("an empty axis wastes the whole window") {
        const ModelParams params{100.0, 0.5};
        CHECK(wasted_space(Configuration{}, params) == 150);
    }
    SUBCASE("the opposite packing wastes nothing either") {
        SimState state = make_opposite_state(ModelParams{4.0, 0.5}, 0);
        CHECK(wasted_space(state.config, state.params) == 0);
    }
}

TEST_CASE("rescaled profiles of the packed optimum") {
    const ModelParams params{8.0, 0.5};
    const RescaledProfile profile = rescaled_profile(packed_config(params), params.r, 0.25);
    REQUIRE(profile.x.size() >= 7);
    for (std::size_t k = 0; k < profile.x.size(); ++k) {
        const double x = profile.x[k];
        CHECK(profile.f1[k] == doctest::Approx(std::min(x, 0.5)));
        CHECK(profile.f2[k] == doctest::Approx(std::clamp((x - 0.5) / 2.0, 0.0, 0.5)));
    }
}

TEST_CASE("time averages honour warm-up and batching") {
    SUBCASE("a constant signal estimates itself with a zero interval") {
        TimeAverageEstimator estimator(0.0, 1.0);
        for (int k = 0; k < 40; ++k) estimator.accumulate(3.25, 0.5, k * 0.5);
        const EstimateResult result = estimator.finalize();
        CHECK(result.mean == doctest::Approx(3.25));
        CHECK(result.ci_half_width == doctest::Approx(0.0));
        CHECK(result.conclusive);
        CHECK(result.batches == 20);
    }
    SUBCASE("alternating values with equal holds average to the midpoint") {
        TimeAverageEstimator estimator(0.0, 2.0);
        for (int k = 0; k < 40; ++k) estimator.accumulate(k % 2 ? 1.0 : 0.0, 1.0, k);
        const EstimateResult result = estimator.finalize();
        CHECK(result.mean == doctest::Approx(0.5));
        CHECK(result.ci_half_width == doctest::Approx(0.0));
    }
    SUBCASE("pre-warm-up values are ignored, straddles are clipped") {
        TimeAverageEstimator estimator(10.0, 1.0);
        estimator.accumulate(99.0, 8.0, 0.0);   // entirely before warm-up
        estimator.accumulate(99.0, 4.0, 8.0);   // clipped to [10, 12)
        estimator.accumulate(1.0, 8.0, 12.0);
        const EstimateResult result = estimator.finalize();
        CHECK(result.mean == doctest::Approx((99.0 * 2.0 + 1.0 * 8.0) / 10.0));
        CHECK(estimator.elapsed() == doctest::Approx(10.0));
    }
    SUBCASE("too little data is reported as inconclusive") {
        TimeAverageEstimator estimator(0.0, 10.0);
        estimator.accumulate(5.0, 1.0, 0.0);
        const EstimateResult result = estimator.finalize();
        CHECK_FALSE(result.conclusive);
        CHECK(std::isnan(result.ci_half_width));
        CHECK(result.mean == doctest::Approx(5.0));

        const EstimateResult empty = TimeAverageEstimator(0.0, 1.0).finalize();
        CHECK_FALSE(empty.conclusive);
        CHECK(std::isnan(empty.mean));
    }
}

TEST_CASE("estimator matches a hand-computed integral") {
    TimeAverageEstimator estimator(1.0, 2.0);
    estimator.accumulate(2.0, 1.5, 0.0);  // clipped to [1, 1.5): 1.0
    estimator.accumulate(4.0, 2.5, 1.5);  // [1.5, 4): 10.0
    estimator.accumulate(1.0, 1.0, 4.0);  // [4, 5): 1.0
    const EstimateResult result = estimator.finalize();
    CHECK(result.mean == doctest::Approx(12.0 / 4.0));
    CHECK(result.batches == 2);
}

TEST_CASE("window edges resolve to cells with snapping") {
    CHECK(cell_floor(0.55 * 2000.0) == 1100);
    CHECK(cell_ceil(0.55 * 2000.0) == 1100);
    CHECK(cell_floor(68.75) == 68);
    CHECK(cell_ceil(68.75) == 69);
    const WindowCells cells =
        WindowCells::resolve(ModelParams{125.0, 0.5}, WindowSpec{1.0, 0.05, {1}});
    CHECK(cells.window_end == 125);
    CHECK(cells.inner_end == 62);
    CHECK(cells.sub_start == 69);
    CHECK(cells.full_end == 187);
}

TEST_CASE("snapshot agrees with the full scan on random configurations") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int round = 0; round < 10000; ++round) {
        const std::int64_t span = 40 + static_cast<std::int64_t>(u(rng) * 160);
        const Configuration config = round % 2 == 0
                                         ? oracle::random_tiling(rng, span)
                                         : oracle::random_churn(rng, static_cast<int>(span));
        const double r = 20.0 + u(rng) * static_cast<double>(span);
        const double p1 = 0.2 + 0.6 * u(rng);
        const ModelParams params{r, p1};
        WindowSpec window;
        window.y = p1 + (0.1 + u(rng)) * (1.0 - p1);
        window.delta = u(rng) * 0.9 * (window.y - p1);
        window.i_caps = {1, 2, 4, 8, WindowSpec::kUnbounded};

        const ObservableSnapshot snap = snapshot_observables(config, params, window);
        const oracle::Lattice lattice = oracle::lattice_of(config);
        const oracle::SnapshotScan scan = oracle::snapshot(lattice, params, window);

        REQUIRE(snap.ones_in_window == scan.ones);
        REQUIRE(snap.twos_in_window == scan.twos);
        REQUIRE(snap.occupied == scan.occupied_cells);
        REQUIRE(snap.spare_pairs == scan.spare);
        REQUIRE(snap.odd_holes == scan.odd_main);
        REQUIRE(snap.odd_holes_inner == scan.odd_inner);
        REQUIRE(snap.odd_holes_sub == scan.odd_sub);
        REQUIRE(snap.pair_counts == scan.pairs);
        REQUIRE(snap.wasted == scan.wasted);
        CHECK(snap.inner_all_even == (scan.odd_inner == 0));
        CHECK(snap.spare_without_odd == (scan.odd_main == 0 && scan.spare > 0));

        // Structural relations on every sampled configuration.
        const WindowCells cells = WindowCells::resolve(params, window);
        CHECK(snap.odd_holes_sub <= snap.odd_holes);
        CHECK(2 * snap.spare_pairs <= cells.window_end - snap.occupied);
        for (std::size_t a = 0; a + 1 < snap.pair_counts.size(); ++a)
            CHECK(snap.pair_counts[a] <= snap.pair_counts[a + 1]);
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("pair counts never over-count across caps") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 300; ++round) {
        const Configuration config = oracle::random_churn(rng, 150);
        const std::int64_t extent = config.rightmost_extent() + 2;
        for (std::int64_t cap : {1, 2, 3, 5}) {
            const std::int64_t capped = count_odd_pairs(config, 0, extent, cap);
            const std::int64_t all = count_odd_pairs(config, 0, extent, WindowSpec::kUnbounded);
            CHECK(capped <= all);
            CHECK((all - capped) * 2 * cap <= extent);
        }
    }
}

TEST_CASE("odd-free inner windows become rare as r grows") {
    const ModelParams params{200.0, 0.5};
    SimState state = make_empty_state(params, 613);
    WindowSpec window;
    TimeAverageEstimator indicator = TimeAverageEstimator::spanning(10.0, 60.0, 20);

    struct Probe : SimObserver {
        const ModelParams& params;
        const WindowSpec& window;
        TimeAverageEstimator& estimator;
        Probe(const ModelParams& p, const WindowSpec& w, TimeAverageEstimator& e)
            : params(p), window(w), estimator(e) {}
        void observe(const SimState& state, double interval_start, double hold) override {
            const ObservableSnapshot snap = snapshot_observables(state.config, params, window);
            estimator.accumulate(snap.inner_all_even ? 1.0 : 0.0, hold, interval_start);
        }
    } probe(params, window, indicator);

    simulate(std::move(state), 60.0, {&probe});
    const EstimateResult result = indicator.finalize();
    CHECK(result.conclusive);
    CHECK(result.mean < 0.5);
}
