#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ebmc {

// Online mean/variance accumulator (Welford). Holds the count, the running
// mean, and the sum of squared deviations, so variance() is the population
// variance of everything seen so far.
class RunningMoments {
public:
    void update(double x) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("RunningMoments::update: non-finite observation");
        }
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        sum_sq_dev_ += delta * (x - mean_);
    }

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double sum_sq_dev() const { return sum_sq_dev_; }

    // population variance; defined as 0 for fewer than two observations
    double variance() const {
        if (count_ <= 1) return 0.0;
        return sum_sq_dev_ / static_cast<double>(count_);
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double sum_sq_dev_ = 0.0;
};

}  // namespace ebmc
