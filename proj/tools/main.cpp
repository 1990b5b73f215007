#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffpack/engine.hpp"
#include "ffpack/observables.hpp"
#include "ffpack/render.hpp"
#include "ffpack/sweep.hpp"
#include "ffpack/trace.hpp"
#include "ffpack/version.hpp"

namespace {

using namespace ffpack;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        part.erase(0, part.find_first_not_of(" \t"));
        part.erase(part.find_last_not_of(" \t") + 1);
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
    std::vector<double> values;
    for (const std::string& part : split_list(text)) {
        try {
            values.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse '" + part + "' as a number");
        }
    }
    return values;
}

std::vector<std::int64_t> parse_caps(const std::string& text) {
    std::vector<std::int64_t> caps;
    for (const std::string& part : split_list(text)) {
        if (part == "inf" || part == "INF") {
            caps.push_back(WindowSpec::kUnbounded);
            continue;
        }
        try {
            caps.push_back(std::stoll(part));
        } catch (const std::exception&) {
            throw CLI::ValidationError("i-list", "cannot parse '" + part + "' as a cap");
        }
    }
    return caps;
}

InitKind parse_init_or_throw(const std::string& text) {
    auto kind = parse_init_kind(text);
    if (!kind)
        throw CLI::ValidationError("init", "expected empty, opposite or snapshot, got '" + text +
                                               "'");
    return *kind;
}

std::string format_time_tag(double t) {
    std::ostringstream out;
    out << t;
    std::string tag = out.str();
    std::replace(tag.begin(), tag.end(), '.', 'p');
    return tag;
}

// Renders the configuration each time the clock passes one of the requested
// times; times at or past the final clock are flushed with the final state.
class SnapshotTimesObserver : public SimObserver {
public:
    SnapshotTimesObserver(std::vector<double> times, std::string prefix,
                          std::int64_t cells_per_row)
        : times_(std::move(times)), prefix_(std::move(prefix)), cells_per_row_(cells_per_row) {
        std::sort(times_.begin(), times_.end());
    }

    void observe(const SimState& state, double interval_start, double hold) override {
        while (next_ < times_.size() && times_[next_] < interval_start + hold) {
            if (times_[next_] >= interval_start) write(state.config, times_[next_]);
            ++next_;
        }
    }

    void flush(const Configuration& config) {
        while (next_ < times_.size()) {
            write(config, times_[next_]);
            ++next_;
        }
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    void write(const Configuration& config, double t) {
        const std::string path = prefix_ + "t" + format_time_tag(t) + ".txt";
        write_snapshot_file(config, cells_per_row_, path);
        written_.push_back(path);
    }

    std::vector<double> times_;
    std::string prefix_;
    std::int64_t cells_per_row_;
    std::size_t next_ = 0;
    std::vector<std::string> written_;
};

struct SimulateOptions {
    double r = 100.0;
    double p1 = 0.5;
    std::uint64_t seed = 0;
    double horizon = 110.0;
    double warmup = 10.0;
    int batches = 20;
    std::string init = "empty";
    std::string snapshot_in;
    std::string trace_out;
    std::string snapshot_times;
    std::string snapshot_out = "snapshot_";
    std::int64_t cells_per_row = 100;
    std::string profile_out;
    double grid_step = 0.01;
    std::string stats_out;
    double y = 1.0;
    double delta = -1.0;
    std::string i_list = "1,2,4,8,inf";
};

int run_simulate(const SimulateOptions& opt) {
    const ModelParams params{opt.r, opt.p1};
    params.validate();

    SimState state;
    switch (parse_init_or_throw(opt.init)) {
        case InitKind::Empty: state = make_empty_state(params, opt.seed); break;
        case InitKind::Opposite: state = make_opposite_state(params, opt.seed); break;
        case InitKind::Snapshot:
            if (opt.snapshot_in.empty())
                throw CLI::ValidationError("snapshot-in", "snapshot init needs --snapshot-in");
            state = make_state_from_config(params, read_snapshot_file(opt.snapshot_in), opt.seed);
            break;
    }

    std::vector<SimObserver*> observers;

    std::optional<SnapshotTimesObserver> snapshots;
    if (!opt.snapshot_times.empty()) {
        snapshots.emplace(parse_doubles(opt.snapshot_times, "snapshot-times"), opt.snapshot_out,
                          opt.cells_per_row);
        observers.push_back(&*snapshots);
    }

    WindowSpec window;
    window.y = opt.y;
    window.delta = opt.delta >= 0.0 ? opt.delta : 0.1 * (opt.y - opt.p1);
    window.i_caps = parse_caps(opt.i_list);
    std::optional<SteadyStatsObserver> stats;
    if (!opt.stats_out.empty()) {
        if (!(opt.horizon > opt.warmup))
            throw CLI::ValidationError("stats-out", "stats need horizon > warmup");
        stats.emplace(params, window, opt.warmup, opt.horizon, opt.batches);
        observers.push_back(&*stats);
    }

    std::ofstream trace;
    DeltaSink sink;
    if (!opt.trace_out.empty()) {
        trace.open(opt.trace_out);
        if (!trace) {
            std::cerr << "cannot write trace file: " << opt.trace_out << "\n";
            return 1;
        }
        trace << "# ffpack " << kVersion << " trace\n";
        trace << "# r=" << opt.r << " p1=" << opt.p1 << " seed=" << opt.seed
              << " init=" << opt.init << " horizon=" << opt.horizon << "\n";
        sink = make_trace_sink(trace);
    }

    RunResult result = simulate(std::move(state), opt.horizon, observers, sink);
    if (snapshots) snapshots->flush(result.state.config);

    const Configuration& config = result.state.config;
    std::cout << "clock " << result.state.clock << ", events " << result.events << " ("
              << result.arrivals << " arrivals, " << result.departures << " departures)\n";
    std::cout << "items: " << config.item_count(ItemType::One) << " of size 1, "
              << config.item_count(ItemType::Two) << " of size 2, extent "
              << config.rightmost_extent() << ", wasted cells " << wasted_space(config, params)
              << "\n";
    if (snapshots)
        for (const std::string& path : snapshots->written())
            std::cout << "wrote snapshot " << path << "\n";

    if (!opt.profile_out.empty()) {
        const RescaledProfile profile = rescaled_profile(config, opt.r, opt.grid_step);
        std::ofstream out(opt.profile_out);
        if (!out) {
            std::cerr << "cannot write profile file: " << opt.profile_out << "\n";
            return 1;
        }
        out << "x,f1,f2\n";
        for (std::size_t k = 0; k < profile.x.size(); ++k)
            out << profile.x[k] << ',' << profile.f1[k] << ',' << profile.f2[k] << '\n';
        std::cout << "wrote profile " << opt.profile_out << "\n";
    }

    if (stats) {
        nlohmann::ordered_json doc;
        doc["tool"] = "ffpack";
        doc["version"] = kVersion;
        doc["r"] = opt.r;
        doc["p1"] = opt.p1;
        doc["seed"] = opt.seed;
        doc["horizon"] = opt.horizon;
        doc["warmup"] = opt.warmup;
        doc["events"] = result.events;
        nlohmann::ordered_json columns;
        for (const SweepStat& stat : stats->harvest()) {
            nlohmann::ordered_json entry;
            entry["mean"] = stat.estimate.mean;
            entry["ci_half_width"] = stat.estimate.ci_half_width;
            entry["batches"] = stat.estimate.batches;
            entry["conclusive"] = stat.estimate.conclusive;
            entry["scaled_by_r"] = stat.scaled;
            columns[stat.name] = entry;
        }
        doc["estimates"] = columns;
        std::ofstream out(opt.stats_out);
        if (!out) {
            std::cerr << "cannot write stats file: " << opt.stats_out << "\n";
            return 1;
        }
        out << doc.dump(2) << "\n";
        std::cout << "wrote stats " << opt.stats_out << "\n";
    }
    return 0;
}

struct SweepOptions {
    std::uint64_t seed = 0;
    std::string r_values = "125,250,500,1000,2000";
    double p1 = 0.5;
    double y = 1.0;
    double delta = -1.0;
    std::string i_list = "1,2,4,8,inf";
    double warmup = 10.0;
    double horizon = 110.0;
    int replications = 8;
    int batches = 20;
    std::string init = "empty";
    std::string snapshot_in;
    int threads = 0;
    std::string out = "sweep.csv";
    std::string meta_out;
};

int run_sweep_command(const SweepOptions& opt) {
    ExperimentConfig config;
    config.master_seed = opt.seed;
    config.r_values = parse_doubles(opt.r_values, "r-values");
    config.p1 = opt.p1;
    config.y = opt.y;
    config.delta = opt.delta;
    config.i_caps = parse_caps(opt.i_list);
    config.warmup = opt.warmup;
    config.horizon = opt.horizon;
    config.replications = opt.replications;
    config.batches = opt.batches;
    config.init = parse_init_or_throw(opt.init);
    config.snapshot_path = opt.snapshot_in;
    config.threads = opt.threads;

    const SweepResult result = run_sweep(config);

    if (opt.out == "-") {
        write_sweep_csv(result, config, std::cout);
    } else {
        std::ofstream out(opt.out);
        if (!out) {
            std::cerr << "cannot write " << opt.out << "\n";
            return 1;
        }
        write_sweep_csv(result, config, out);
        std::cout << "wrote " << opt.out << " (" << result.rows.size() << " rows)\n";
    }
    if (!opt.meta_out.empty()) {
        std::ofstream meta(opt.meta_out);
        if (!meta) {
            std::cerr << "cannot write " << opt.meta_out << "\n";
            return 1;
        }
        meta << sweep_meta_json(config);
    }
    return 0;
}

int run_replay(const std::string& trace_path, std::size_t max_report) {
    const ReplayReport report = replay_trace_file(trace_path);
    std::cout << "replayed " << report.records << " records (" << report.arrivals
              << " arrivals, " << report.departures << " departures)\n";
    std::size_t shown = 0;
    for (const ReplayIssue& issue : report.malformed) {
        if (shown++ >= max_report) break;
        std::cout << "line " << issue.line << ": malformed: " << issue.message << "\n";
    }
    for (const ReplayIssue& issue : report.mismatches) {
        if (shown++ >= max_report) break;
        std::cout << "line " << issue.line << ": mismatch: " << issue.message << "\n";
    }
    std::cout << report.mismatches.size() << " mismatches, " << report.malformed.size()
              << " malformed lines\n";
    return report.clean() ? 0 : 1;
}

int run_snapshot(const std::string& in, const std::string& out, std::int64_t cells_per_row) {
    const Configuration config = read_snapshot_file(in);
    const std::string text = render_snapshot(config, cells_per_row);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        std::ofstream file(out);
        if (!file) {
            std::cerr << "cannot write " << out << "\n";
            return 1;
        }
        file << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-fit packing simulator on the half-axis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ffpack::kVersion);
    // Keys live in a [simulate] or [sweep] section; command-line values win.
    app.set_config("--config", "", "read options from a config file");

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run one replication");
    simulate->fallthrough();
    simulate->add_option("--r", sim.r, "arrival rate scale");
    simulate->add_option("--p1", sim.p1, "probability of a size-1 arrival");
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    simulate->add_option("--horizon", sim.horizon, "run until this clock");
    simulate->add_option("--warmup", sim.warmup, "cutoff for time averages");
    simulate->add_option("--batches", sim.batches, "batch count for CIs");
    simulate->add_option("--init", sim.init, "empty, opposite or snapshot");
    simulate->add_option("--snapshot-in", sim.snapshot_in, "initial state pixmap");
    simulate->add_option("--trace-out", sim.trace_out, "record every event here");
    simulate->add_option("--snapshot-times", sim.snapshot_times,
                         "comma-separated clocks to render the state at");
    simulate->add_option("--snapshot-out", sim.snapshot_out, "path prefix for rendered states");
    simulate->add_option("--cells-per-row", sim.cells_per_row, "pixmap wrap width");
    simulate->add_option("--profile-out", sim.profile_out, "write the rescaled item profile CSV");
    simulate->add_option("--grid-step", sim.grid_step, "profile grid step");
    simulate->add_option("--stats-out", sim.stats_out, "write steady-state estimates JSON");
    simulate->add_option("--y", sim.y, "main window edge, in units of r");
    simulate->add_option("--delta", sim.delta, "sub-window offset from p1, in units of r");
    simulate->add_option("--i-list", sim.i_list, "pair caps, e.g. 1,2,4,8,inf");

    SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "replicated runs over several r values");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--seed", sweep.seed, "master seed")->required();
    sweep_cmd->add_option("--r-values", sweep.r_values, "comma-separated r values");
    sweep_cmd->add_option("--p1", sweep.p1, "probability of a size-1 arrival");
    sweep_cmd->add_option("--y", sweep.y, "main window edge, in units of r");
    sweep_cmd->add_option("--delta", sweep.delta, "sub-window offset from p1");
    sweep_cmd->add_option("--i-list", sweep.i_list, "pair caps, e.g. 1,2,4,8,inf");
    sweep_cmd->add_option("--warmup", sweep.warmup, "cutoff for time averages");
    sweep_cmd->add_option("--horizon", sweep.horizon, "run each replication until this clock");
    sweep_cmd->add_option("--replications", sweep.replications, "replications per r");
    sweep_cmd->add_option("--batches", sweep.batches, "batch count for CIs");
    sweep_cmd->add_option("--init", sweep.init, "empty, opposite or snapshot");
    sweep_cmd->add_option("--snapshot-in", sweep.snapshot_in, "initial state pixmap");
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0 = auto)");
    sweep_cmd->add_option("--out", sweep.out, "CSV output path, - for stdout");
    sweep_cmd->add_option("--meta-out", sweep.meta_out, "run metadata JSON path");

    std::string replay_path;
    std::size_t replay_max_report = 20;
    CLI::App* replay = app.add_subcommand("replay", "verify a recorded trace");
    replay->add_option("--trace", replay_path, "trace file")->required();
    replay->add_option("--max-report", replay_max_report, "issue lines to print");

    std::string snap_in, snap_out;
    std::int64_t snap_cells = 100;
    CLI::App* snapshot = app.add_subcommand("snapshot", "re-render a stored pixmap");
    snapshot->add_option("--in", snap_in, "stored pixmap")->required();
    snapshot->add_option("--out", snap_out, "output path, - for stdout");
    snapshot->add_option("--cells-per-row", snap_cells, "pixmap wrap width");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (sweep_cmd->parsed()) return run_sweep_command(sweep);
        if (replay->parsed()) return run_replay(replay_path, replay_max_report);
        if (snapshot->parsed()) return run_snapshot(snap_in, snap_out, snap_cells);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
