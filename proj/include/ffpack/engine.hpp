#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <unordered_map>
#include <vector>

#include "ffpack/fit_index.hpp"
#include "ffpack/model.hpp"

namespace ffpack {

struct Event {
    enum class Kind : std::uint8_t { Arrival, Departure };

    Kind kind = Kind::Arrival;
    ItemType type = ItemType::One;          // arrivals only
    Configuration::ItemId item_id = 0;      // departures only
    double at = 0.0;
};

// One applied event, with enough detail to reproduce the run exactly.
struct DeltaRecord {
    std::uint64_t event_index = 0;
    double clock = 0.0;
    Event::Kind kind = Event::Kind::Arrival;
    ItemType type = ItemType::One;
    Configuration::ItemId item_id = 0;
    std::int64_t placement_start = -1;      // arrivals only
};

// Full simulation state.  The configuration and the fit index describe the
// same occupancy; apply_event cross-checks them against each other on every
// placement.  live_ids/live_pos support O(1) uniform departure draws.
struct SimState {
    ModelParams params;
    Configuration config;
    FitIndex index;
    double clock = 0.0;
    std::uint64_t event_index = 0;
    std::mt19937_64 rng;
    std::vector<Configuration::ItemId> live_ids;
    std::unordered_map<Configuration::ItemId, std::size_t> live_pos;
};

SimState make_empty_state(const ModelParams& params, std::uint64_t seed);

// Packed start: round(p2*r) 2-items from cell 0, then round(p1*r) 1-items
// immediately after, no gaps.
SimState make_opposite_state(const ModelParams& params, std::uint64_t seed);

SimState make_state_from_config(const ModelParams& params, const Configuration& config,
                                std::uint64_t seed);

// Competing exponential clocks collapsed into one draw: the state holds for
// an Exp(r + n) time, then the change is an arrival with probability
// r/(r+n) (type 1 with sub-probability p1) and otherwise the departure of a
// uniformly chosen live item.  With no live items an arrival is certain.
// Advances state.clock and returns the event; the caller applies it.
Event draw_next_event(SimState& state);

DeltaRecord apply_event(SimState& state, const Event& event);

// Stable per-replication seed derived from a master seed.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t replication);

class SimObserver {
public:
    virtual ~SimObserver() = default;

    // Called once per holding interval, before the state change that ends
    // it.  The configuration is constant over [interval_start,
    // interval_start + hold); intervals clipped at the horizon keep their
    // exact length, so time-weighted integrals carry no discretisation
    // error.
    virtual void observe(const SimState& state, double interval_start, double hold) = 0;
};

using DeltaSink = std::function<void(const DeltaRecord&)>;

struct RunResult {
    SimState state;
    std::uint64_t events = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
};

// Runs until the clock reaches the horizon.  A zero horizon returns the
// initial state untouched.
RunResult simulate(SimState state, double horizon, const std::vector<SimObserver*>& observers = {},
                   const DeltaSink& on_event = {});

}  // namespace ffpack
