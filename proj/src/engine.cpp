#include "ffpack/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ffpack {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4ecb1f5532f9dULL;
    return x ^ (x >> 31);
}

void register_live(SimState& state, Configuration::ItemId id) {
    state.live_pos.emplace(id, state.live_ids.size());
    state.live_ids.push_back(id);
}

void unregister_live(SimState& state, Configuration::ItemId id) {
    auto it = state.live_pos.find(id);
    if (it == state.live_pos.end())
        throw ContractViolation("departure of item not in live set");
    const std::size_t pos = it->second;
    const Configuration::ItemId moved = state.live_ids.back();
    state.live_ids[pos] = moved;
    state.live_ids.pop_back();
    state.live_pos[moved] = pos;
    state.live_pos.erase(id);
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t replication) {
    return splitmix64(splitmix64(master_seed) ^ (replication + 1));
}

SimState make_empty_state(const ModelParams& params, std::uint64_t seed) {
    params.validate();
    SimState state;
    state.params = params;
    state.rng.seed(seed);
    return state;
}

SimState make_state_from_config(const ModelParams& params, const Configuration& config,
                                std::uint64_t seed) {
    SimState state = make_empty_state(params, seed);
    state.config = config;
    state.index.reserve(config.rightmost_extent() + 2);
    std::vector<Configuration::ItemId> ids;
    ids.reserve(config.items().size());
    for (const auto& [id, item] : config.items()) {
        state.index.set_occupied(item.start, item.size());
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    for (Configuration::ItemId id : ids) register_live(state, id);
    return state;
}

SimState make_opposite_state(const ModelParams& params, std::uint64_t seed) {
    params.validate();
    Configuration config;
    const auto twos = static_cast<std::int64_t>(std::llround(params.p2() * params.r));
    const auto ones = static_cast<std::int64_t>(std::llround(params.p1 * params.r));
    std::int64_t cell = 0;
    for (std::int64_t k = 0; k < twos; ++k, cell += 2) config.place_at(ItemType::Two, cell);
    for (std::int64_t k = 0; k < ones; ++k, cell += 1) config.place_at(ItemType::One, cell);
    return make_state_from_config(params, config, seed);
}

Event draw_next_event(SimState& state) {
    const double r = state.params.r;
    const auto n = static_cast<double>(state.live_ids.size());
    const double total_rate = r + n;

    state.clock += std::exponential_distribution<double>(total_rate)(state.rng);

    Event event;
    event.at = state.clock;
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(state.rng);
    if (u * total_rate < r) {
        event.kind = Event::Kind::Arrival;
        event.type = (u * total_rate < r * state.params.p1) ? ItemType::One : ItemType::Two;
    } else {
        event.kind = Event::Kind::Departure;
        std::uniform_int_distribution<std::size_t> pick(0, state.live_ids.size() - 1);
        event.item_id = state.live_ids[pick(state.rng)];
    }
    return event;
}

DeltaRecord apply_event(SimState& state, const Event& event) {
    DeltaRecord delta;
    delta.event_index = state.event_index;
    delta.clock = event.at;
    delta.kind = event.kind;

    const std::int64_t items_before = state.config.item_count();
    const std::int64_t cells_before = state.config.occupied_cells();

    if (event.kind == Event::Kind::Arrival) {
        const std::int64_t width = item_size(event.type);
        const std::int64_t indexed = state.index.leftmost_fit(width);
        const auto [id, start] = state.config.place_first_fit(event.type);
        if (start != indexed)
            throw ContractViolation("fit index disagrees with configuration: index " +
                                    std::to_string(indexed) + ", configuration " +
                                    std::to_string(start));
        state.index.set_occupied(start, width);
        register_live(state, id);
        delta.type = event.type;
        delta.item_id = id;
        delta.placement_start = start;
        if (state.config.item_count() != items_before + 1 ||
            state.config.occupied_cells() != cells_before + width)
            throw ContractViolation("arrival broke conservation");
    } else {
        const Item* item = state.config.find_item(event.item_id);
        if (item == nullptr)
            throw ContractViolation("departure of unknown item id " +
                                    std::to_string(event.item_id));
        const std::int64_t start = item->start;
        const std::int64_t width = item->size();
        delta.type = item->type;
        delta.item_id = event.item_id;
        state.config.remove_item(event.item_id);
        state.index.set_free(start, width);
        unregister_live(state, event.item_id);
        if (state.config.item_count() != items_before - 1 ||
            state.config.occupied_cells() != cells_before - width)
            throw ContractViolation("departure broke conservation");
    }

    ++state.event_index;
    return delta;
}

RunResult simulate(SimState state, double horizon, const std::vector<SimObserver*>& observers,
                   const DeltaSink& on_event) {
    RunResult result;
    while (state.clock < horizon) {
        const double interval_start = state.clock;
        const Event event = draw_next_event(state);
        const double hold = std::min(event.at, horizon) - interval_start;
        for (SimObserver* observer : observers) observer->observe(state, interval_start, hold);
        if (event.at >= horizon) {
            state.clock = horizon;
            break;
        }
        const DeltaRecord delta = apply_event(state, event);
        if (on_event) on_event(delta);
        ++result.events;
        if (delta.kind == Event::Kind::Arrival)
            ++result.arrivals;
        else
            ++result.departures;
    }
    result.state = std::move(state);
    return result;
}

}  // namespace ffpack
