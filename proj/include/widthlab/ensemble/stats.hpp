#pragma once

#include <utility>
#include <vector>

#include "widthlab/errors.hpp"

namespace widthlab::ensemble {

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double stderror = 0.0;  // sqrt(variance / count)
    std::int64_t count = 0;
};

// pairwise-summed two-pass moments; result independent of thread count
SampleStats sample_stats(const std::vector<double>& values);

struct SlopeFit {
    double slope = 0.0;
    double stderror = 0.0;
    int points_used = 0;
};

// OLS of log2|value| on log2(width). Throws LowSignal for fewer than 3
// points. stderr comes from the fit residuals (0 for an exact power law).
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& width_value);

}  // namespace widthlab::ensemble
