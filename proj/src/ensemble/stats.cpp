#include "widthlab/ensemble/stats.hpp"

#include <cmath>

#include "widthlab/parallel.hpp"

namespace widthlab::ensemble {

SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    s.count = static_cast<std::int64_t>(values.size());
    if (s.count == 0) return s;
    s.mean = pairwise_sum(values) / static_cast<double>(s.count);
    if (s.count < 2) return s;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - s.mean;
        sq[i] = d * d;
    }
    s.variance = pairwise_sum(sq) / static_cast<double>(s.count - 1);
    s.stderror = std::sqrt(s.variance / static_cast<double>(s.count));
    return s;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& width_value) {
    const int k = static_cast<int>(width_value.size());
    if (k < 3) throw LowSignal("slope fit needs >= 3 admissible widths, got " + std::to_string(k));
    double sx = 0, sy = 0;
    std::vector<double> xs(k), ys(k);
    for (int i = 0; i < k; ++i) {
        xs[i] = std::log2(width_value[i].first);
        ys[i] = std::log2(std::abs(width_value[i].second));
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.points_used = k;
    fit.slope = sxy / sxx;
    double rss = 0;
    for (int i = 0; i < k; ++i) {
        const double r = ys[i] - my - fit.slope * (xs[i] - mx);
        rss += r * r;
    }
    if (k > 2) fit.stderror = std::sqrt(rss / (k - 2) / sxx);
    return fit;
}

}  // namespace widthlab::ensemble
