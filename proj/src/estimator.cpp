#include "ffpack/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ffpack {

TimeAverageEstimator::TimeAverageEstimator(double warmup, double batch_length)
    : warmup_(warmup), batch_length_(batch_length), last_time_(warmup) {
    if (!(warmup >= 0.0)) throw std::invalid_argument("estimator: warmup must be >= 0");
    if (!(batch_length > 0.0)) throw std::invalid_argument("estimator: batch length must be > 0");
}

TimeAverageEstimator TimeAverageEstimator::spanning(double warmup, double horizon, int batches) {
    if (!(horizon > warmup) || batches < 1)
        throw std::invalid_argument("estimator: need horizon > warmup and at least one batch");
    return TimeAverageEstimator(warmup, (horizon - warmup) / batches);
}

void TimeAverageEstimator::accumulate(double value, double hold, double interval_start) {
    if (hold < 0.0) throw std::invalid_argument("estimator: negative holding time");
    const double from = std::max(interval_start, warmup_);
    const double to = interval_start + hold;
    if (to <= from) return;

    integral_ += value * (to - from);
    elapsed_ += to - from;
    last_time_ = std::max(last_time_, to);

    auto first = static_cast<std::size_t>((from - warmup_) / batch_length_);
    auto last = static_cast<std::size_t>((to - warmup_) / batch_length_);
    if (batch_integrals_.size() <= last) batch_integrals_.resize(last + 1, 0.0);
    for (std::size_t k = first; k <= last; ++k) {
        const double lo = std::max(from, warmup_ + static_cast<double>(k) * batch_length_);
        const double hi = std::min(to, warmup_ + static_cast<double>(k + 1) * batch_length_);
        if (hi > lo) batch_integrals_[k] += value * (hi - lo);
    }
}

EstimateResult TimeAverageEstimator::finalize() const {
    EstimateResult result;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (elapsed_ <= 0.0) {
        result.mean = nan;
        result.std_error = nan;
        result.ci_half_width = nan;
        return result;
    }
    result.mean = integral_ / elapsed_;

    const auto complete =
        static_cast<std::size_t>(std::max(0.0, (last_time_ - warmup_) / batch_length_ + 1e-9));
    const std::size_t batches = std::min(complete, batch_integrals_.size());
    result.batches = static_cast<long>(batches);
    if (batches < 2) {
        result.std_error = nan;
        result.ci_half_width = nan;
        return result;
    }

    double mean_of_means = 0.0;
    for (std::size_t k = 0; k < batches; ++k)
        mean_of_means += batch_integrals_[k] / batch_length_;
    mean_of_means /= static_cast<double>(batches);
    double ss = 0.0;
    for (std::size_t k = 0; k < batches; ++k) {
        const double d = batch_integrals_[k] / batch_length_ - mean_of_means;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(batches - 1);
    result.std_error = std::sqrt(var / static_cast<double>(batches));
    result.ci_half_width = 1.96 * result.std_error;
    result.conclusive = true;
    return result;
}

}  // namespace ffpack
