#pragma once

#include <cmath>
#include <cstddef>

namespace qmc {

/// One-pass mean/variance accumulator (Welford) with Neumaier-compensated
/// updates; stable for large samples of large-magnitude payoffs.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        accumulate(mean_, mean_c_, delta / static_cast<double>(n_));
        accumulate(m2_, m2_c_, delta * (x - mean_));
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_ + mean_c_; }

    double population_variance() const {
        return n_ > 0 ? (m2_ + m2_c_) / static_cast<double>(n_) : 0.0;
    }
    double sample_variance() const {
        return n_ > 1 ? (m2_ + m2_c_) / static_cast<double>(n_ - 1) : 0.0;
    }
    double population_stdev() const { return std::sqrt(std::max(population_variance(), 0.0)); }
    double sample_stdev() const { return std::sqrt(std::max(sample_variance(), 0.0)); }

private:
    static void accumulate(double& sum, double& comp, double value) {
        const double t = sum + value;
        if (std::fabs(sum) >= std::fabs(value)) {
            comp += (sum - t) + value;
        } else {
            comp += (value - t) + sum;
        }
        sum = t;
    }

    std::size_t n_ = 0;
    double mean_ = 0.0, mean_c_ = 0.0;
    double m2_ = 0.0, m2_c_ = 0.0;
};

/// One-pass covariance accumulator for paired samples.
class RunningCovariance {
public:
    void add(double x, double y) {
        ++n_;
        const double dx = x - mean_x_;
        mean_x_ += dx / static_cast<double>(n_);
        mean_y_ += (y - mean_y_) / static_cast<double>(n_);
        cxy_ += dx * (y - mean_y_);
    }

    std::size_t count() const { return n_; }
    double sample_covariance() const {
        return n_ > 1 ? cxy_ / static_cast<double>(n_ - 1) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_x_ = 0.0, mean_y_ = 0.0;
    double cxy_ = 0.0;
};

}  // namespace qmc
