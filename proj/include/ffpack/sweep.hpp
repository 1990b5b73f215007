#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffpack/engine.hpp"
#include "ffpack/estimator.hpp"
#include "ffpack/observables.hpp"

namespace ffpack {

enum class InitKind { Empty, Opposite, Snapshot };

const char* init_kind_name(InitKind kind);
std::optional<InitKind> parse_init_kind(std::string_view name);

struct ExperimentConfig {
    std::uint64_t master_seed = 0;
    std::vector<double> r_values;
    double p1 = 0.5;
    double y = 1.0;
    double delta = -1.0;  // negative selects the default 0.1 * (y - p1)
    std::vector<std::int64_t> i_caps = {1, 2, 4, 8, WindowSpec::kUnbounded};
    double warmup = 10.0;
    double horizon = 110.0;
    int replications = 8;
    int batches = 20;
    InitKind init = InitKind::Empty;
    std::string snapshot_path;
    int threads = 0;  // 0 picks the hardware concurrency

    double resolved_delta() const { return delta >= 0.0 ? delta : 0.1 * (y - p1); }
    WindowSpec window() const;
    void validate() const;
};

// Column identities for one row.  Estimates marked scaled are divided by r
// when written out; probabilities and raw counts are not.
struct SweepStat {
    std::string name;
    bool scaled = false;
    EstimateResult estimate;
};

struct SweepRow {
    double r = 0.0;
    int replication = 0;  // kPooledRow marks the per-r pooled row
    std::uint64_t seed = 0;
    std::vector<SweepStat> stats;

    static constexpr int kPooledRow = -1;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

const EstimateResult* find_stat(const SweepRow& row, std::string_view name);

// Runs replications for every r value and appends one pooled row per r.
// Replications are independent (seeded from the master seed and the
// replication's global index) and may run on worker threads; results are
// deterministic regardless of thread count.  The pooled estimate is the
// mean of the replication means with a CI from their spread.
SweepResult run_sweep(const ExperimentConfig& config);

void write_sweep_csv(const SweepResult& result, const ExperimentConfig& config, std::ostream& out);

std::string sweep_meta_json(const ExperimentConfig& config);

// Estimators for every sweep column over one run; reusable by the
// single-run CLI path.  Values are sampled event-synchronously and
// time-weighted with the exact holding times.
class SteadyStatsObserver : public SimObserver {
public:
    SteadyStatsObserver(const ModelParams& params, const WindowSpec& window, double warmup,
                        double horizon, int batches);

    void observe(const SimState& state, double interval_start, double hold) override;

    // One entry per column, in the canonical column order.
    std::vector<SweepStat> harvest() const;

private:
    ModelParams params_;
    WindowSpec window_;
    WindowCells cells_;
    std::vector<std::string> names_;
    std::vector<bool> scaled_;
    std::vector<TimeAverageEstimator> estimators_;
};

}  // namespace ffpack
