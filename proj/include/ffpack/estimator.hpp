#pragma once

#include <vector>

namespace ffpack {

struct EstimateResult {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_half_width = 0.0;  // 95% normal approximation
    long batches = 0;
    bool conclusive = false;
};

// Time-weighted mean of a piecewise-constant signal with a warm-up cutoff
// and a batch-means confidence interval.  Intervals straddling the warm-up
// boundary or a batch boundary are split exactly, so the integral carries
// no discretisation error.  With fewer than two complete batches the result
// is marked inconclusive rather than given an invented interval.
class TimeAverageEstimator {
public:
    TimeAverageEstimator(double warmup, double batch_length);

    // Convenience: batches sized so that `batches` of them span
    // [warmup, horizon).
    static TimeAverageEstimator spanning(double warmup, double horizon, int batches = 20);

    void accumulate(double value, double hold, double interval_start);

    EstimateResult finalize() const;

    double warmup() const { return warmup_; }
    double elapsed() const { return elapsed_; }

private:
    double warmup_ = 0.0;
    double batch_length_ = 1.0;
    double integral_ = 0.0;
    double elapsed_ = 0.0;
    double last_time_ = 0.0;  // right edge of the latest measured interval
    std::vector<double> batch_integrals_;
};

}  // namespace ffpack
