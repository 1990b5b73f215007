#include "ffpack/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "ffpack/render.hpp"
#include "ffpack/version.hpp"

namespace ffpack {

const char* init_kind_name(InitKind kind) {
    switch (kind) {
        case InitKind::Empty: return "empty";
        case InitKind::Opposite: return "opposite";
        case InitKind::Snapshot: return "snapshot";
    }
    return "?";
}

std::optional<InitKind> parse_init_kind(std::string_view name) {
    if (name == "empty") return InitKind::Empty;
    if (name == "opposite") return InitKind::Opposite;
    if (name == "snapshot") return InitKind::Snapshot;
    return std::nullopt;
}

WindowSpec ExperimentConfig::window() const {
    WindowSpec spec;
    spec.y = y;
    spec.delta = resolved_delta();
    spec.i_caps = i_caps;
    return spec;
}

void ExperimentConfig::validate() const {
    if (r_values.empty()) throw std::invalid_argument("sweep: need at least one r value");
    for (double r : r_values) ModelParams{r, p1}.validate();
    if (!(y > p1))
        throw std::invalid_argument("sweep: window y must exceed p1");
    const double d = resolved_delta();
    if (!(d >= 0.0) || !(d < y - p1))
        throw std::invalid_argument("sweep: delta must lie in [0, y - p1)");
    if (!(warmup >= 0.0) || !(horizon > warmup))
        throw std::invalid_argument("sweep: need 0 <= warmup < horizon");
    if (replications < 1) throw std::invalid_argument("sweep: need at least one replication");
    if (batches < 2) throw std::invalid_argument("sweep: need at least two batches");
    if (init == InitKind::Snapshot && snapshot_path.empty())
        throw std::invalid_argument("sweep: snapshot init needs a snapshot path");
    window().validate(ModelParams{r_values.front(), p1});
}

namespace {

std::string cap_label(std::int64_t cap) {
    return cap == WindowSpec::kUnbounded ? "inf" : std::to_string(cap);
}

}  // namespace

SteadyStatsObserver::SteadyStatsObserver(const ModelParams& params, const WindowSpec& window,
                                         double warmup, double horizon, int batches)
    : params_(params), window_(window), cells_(WindowCells::resolve(params, window)) {
    auto column = [&](std::string name, bool scaled) {
        names_.push_back(std::move(name));
        scaled_.push_back(scaled);
        estimators_.push_back(TimeAverageEstimator::spanning(warmup, horizon, batches));
    };
    column("n1", false);
    column("n2", false);
    column("f1_p1r", true);
    column("f2_p1r", true);
    column("f1_opt", true);
    column("f2_opt", true);
    column("f1_yr", true);
    column("f2_yr", true);
    column("x_yr", true);
    column("d_yr", true);
    column("g_yr", true);
    column("g1", true);
    column("gdelta", true);
    for (std::int64_t cap : window.i_caps) column("u_" + cap_label(cap), true);
    column("p_g1_zero", false);
    column("p_g0_dpos", false);
    column("wasted", true);
    column("empty_p1win", true);
}

void SteadyStatsObserver::observe(const SimState& state, double interval_start, double hold) {
    if (hold <= 0.0) return;
    if (interval_start + hold <= estimators_.front().warmup()) return;

    const Configuration& config = state.config;
    const ObservableSnapshot snap = snapshot_observables(config, params_, window_);

    std::size_t k = 0;
    auto push = [&](double value) { estimators_[k++].accumulate(value, hold, interval_start); };
    push(static_cast<double>(config.item_count(ItemType::One)));
    push(static_cast<double>(config.item_count(ItemType::Two)));
    push(static_cast<double>(config.items_left_of(ItemType::One, cells_.inner_end)));
    push(static_cast<double>(config.items_left_of(ItemType::Two, cells_.inner_end)));
    push(static_cast<double>(config.items_left_of(ItemType::One, cells_.full_end)));
    push(static_cast<double>(config.items_left_of(ItemType::Two, cells_.full_end)));
    push(static_cast<double>(snap.ones_in_window));
    push(static_cast<double>(snap.twos_in_window));
    push(static_cast<double>(snap.occupied));
    push(static_cast<double>(snap.spare_pairs));
    push(static_cast<double>(snap.odd_holes));
    push(static_cast<double>(snap.odd_holes_inner));
    push(static_cast<double>(snap.odd_holes_sub));
    for (std::int64_t count : snap.pair_counts) push(static_cast<double>(count));
    push(snap.inner_all_even ? 1.0 : 0.0);
    push(snap.spare_without_odd ? 1.0 : 0.0);
    push(static_cast<double>(snap.wasted));
    push(static_cast<double>(config.empty_cells_below(cells_.inner_end)));
}

std::vector<SweepStat> SteadyStatsObserver::harvest() const {
    std::vector<SweepStat> stats;
    stats.reserve(names_.size());
    for (std::size_t k = 0; k < names_.size(); ++k)
        stats.push_back(SweepStat{names_[k], scaled_[k], estimators_[k].finalize()});
    return stats;
}

const EstimateResult* find_stat(const SweepRow& row, std::string_view name) {
    for (const SweepStat& stat : row.stats)
        if (stat.name == name) return &stat.estimate;
    return nullptr;
}

namespace {

SweepRow pooled_row(const std::vector<SweepRow>& replications, double r, std::uint64_t seed) {
    SweepRow pooled;
    pooled.r = r;
    pooled.replication = SweepRow::kPooledRow;
    pooled.seed = seed;
    const std::size_t columns = replications.front().stats.size();
    const auto n = static_cast<double>(replications.size());
    for (std::size_t k = 0; k < columns; ++k) {
        SweepStat stat;
        stat.name = replications.front().stats[k].name;
        stat.scaled = replications.front().stats[k].scaled;
        double mean = 0.0;
        for (const SweepRow& row : replications) mean += row.stats[k].estimate.mean;
        mean /= n;
        double ss = 0.0;
        for (const SweepRow& row : replications) {
            const double d = row.stats[k].estimate.mean - mean;
            ss += d * d;
        }
        stat.estimate.mean = mean;
        stat.estimate.batches = static_cast<long>(replications.size());
        if (replications.size() >= 2) {
            stat.estimate.std_error = std::sqrt(ss / (n - 1.0) / n);
            stat.estimate.ci_half_width = 1.96 * stat.estimate.std_error;
            stat.estimate.conclusive = true;
        } else {
            stat.estimate.std_error = std::numeric_limits<double>::quiet_NaN();
            stat.estimate.ci_half_width = std::numeric_limits<double>::quiet_NaN();
        }
        pooled.stats.push_back(std::move(stat));
    }
    return pooled;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();

    Configuration snapshot_init;
    if (config.init == InitKind::Snapshot) snapshot_init = read_snapshot_file(config.snapshot_path);

    const std::size_t reps = static_cast<std::size_t>(config.replications);
    const std::size_t tasks = config.r_values.size() * reps;
    std::vector<SweepRow> replication_rows(tasks);
    std::vector<std::exception_ptr> errors(tasks);

    auto run_task = [&](std::size_t task) {
        const std::size_t r_index = task / reps;
        const std::size_t rep = task % reps;
        const double r = config.r_values[r_index];
        const ModelParams params{r, config.p1};
        const std::uint64_t seed = replication_seed(config.master_seed, task);

        SimState state;
        switch (config.init) {
            case InitKind::Empty: state = make_empty_state(params, seed); break;
            case InitKind::Opposite: state = make_opposite_state(params, seed); break;
            case InitKind::Snapshot:
                state = make_state_from_config(params, snapshot_init, seed);
                break;
        }
        SteadyStatsObserver observer(params, config.window(), config.warmup, config.horizon,
                                     config.batches);
        simulate(std::move(state), config.horizon, {&observer});

        SweepRow& row = replication_rows[task];
        row.r = r;
        row.replication = static_cast<int>(rep);
        row.seed = seed;
        row.stats = observer.harvest();
    };

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks));
    if (workers <= 1) {
        for (std::size_t task = 0; task < tasks; ++task) run_task(task);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t task = next.fetch_add(1); task < tasks;
                     task = next.fetch_add(1)) {
                    try {
                        run_task(task);
                    } catch (...) {
                        errors[task] = std::current_exception();
                    }
                }
            });
        for (std::thread& worker : pool) worker.join();
        for (std::exception_ptr& error : errors)
            if (error) std::rethrow_exception(error);
    }

    SweepResult result;
    for (std::size_t r_index = 0; r_index < config.r_values.size(); ++r_index) {
        std::vector<SweepRow> rows(replication_rows.begin() + static_cast<std::ptrdiff_t>(r_index * reps),
                                   replication_rows.begin() + static_cast<std::ptrdiff_t>((r_index + 1) * reps));
        for (SweepRow& row : rows) result.rows.push_back(row);
        result.rows.push_back(pooled_row(rows, config.r_values[r_index], config.master_seed));
    }
    return result;
}

namespace {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

}  // namespace

void write_sweep_csv(const SweepResult& result, const ExperimentConfig& config,
                     std::ostream& out) {
    out << "r,rep,seed,warmup,horizon";
    if (!result.rows.empty())
        for (const SweepStat& stat : result.rows.front().stats)
            out << ',' << stat.name << ',' << stat.name << "_ci";
    out << '\n';
    for (const SweepRow& row : result.rows) {
        out << format_double(row.r) << ',';
        if (row.replication == SweepRow::kPooledRow)
            out << "pooled";
        else
            out << row.replication;
        out << ',' << row.seed << ',' << format_double(config.warmup) << ','
            << format_double(config.horizon);
        for (const SweepStat& stat : row.stats) {
            const double scale = stat.scaled ? row.r : 1.0;
            out << ',' << format_double(stat.estimate.mean / scale) << ','
                << format_double(stat.estimate.ci_half_width / scale);
        }
        out << '\n';
    }
}

std::string sweep_meta_json(const ExperimentConfig& config) {
    nlohmann::ordered_json meta;
    meta["tool"] = "ffpack";
    meta["version"] = kVersion;
    meta["seed"] = config.master_seed;
    meta["r_values"] = config.r_values;
    meta["p1"] = config.p1;
    meta["y"] = config.y;
    meta["delta"] = config.resolved_delta();
    std::vector<std::string> caps;
    for (std::int64_t cap : config.i_caps) caps.push_back(cap_label(cap));
    meta["i_caps"] = caps;
    meta["warmup"] = config.warmup;
    meta["horizon"] = config.horizon;
    meta["replications"] = config.replications;
    meta["batches"] = config.batches;
    meta["init"] = init_kind_name(config.init);
    if (config.init == InitKind::Snapshot) meta["snapshot"] = config.snapshot_path;
    return meta.dump(2) + "\n";
}

}  // namespace ffpack
