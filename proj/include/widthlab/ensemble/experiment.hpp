#pragma once

#include <optional>
#include <string>
#include <vector>

#include "widthlab/corr/cluster.hpp"
#include "widthlab/corr/spec.hpp"
#include "widthlab/ensemble/stats.hpp"
#include "widthlab/net/mlp.hpp"
#include "widthlab/rational.hpp"

namespace widthlab::ensemble {

struct NetSettings {
    net::Activation activation = net::Activation::linear;
    int hidden_layers = 3;
    net::InitKind init = net::InitKind::gaussian_unit;
    int input_dim = 4;
    bool normalize_input = false;
};

struct ExperimentConfig {
    std::string name;
    corr::CorrelationSpec spec;
    NetSettings net;
    std::vector<int> widths = {32, 64, 128, 256, 512};
    int seeds_per_width = 200;
    std::uint64_t master_seed = 1;
    int workers = 1;

    void validate() const;
};

struct WidthStats {
    int width = 0;
    SampleStats stats;
    bool admissible = false;  // |mean| > 2 * stderr
};

struct ScalingResult {
    std::string name;
    std::vector<WidthStats> per_width;
    SlopeFit mean_fit;        // slope of log2|mean|
    SlopeFit variance_fit;    // slope of log2(variance)
    bool mean_low_signal = false;
    int mean_sign = 0;        // sign of the mean at the largest admissible width
    Rational bound;           // s_C
    Rational variance_bound;  // 2 s_C
    bool mean_bound_violated = false;      // slope > s_C + 3 stderr
    bool variance_bound_violated = false;  // slope > 2 s_C + 3 stderr
};

// Monte Carlo width scan of one correlation function: inputs drawn once from
// the master seed, parameters per (width index, seed index) substream, both
// the mean and the integrand variance fitted against width.
ScalingResult run(const ExperimentConfig& config);
ScalingResult run_variance(const ExperimentConfig& config);  // same scan, variance headline

// Evaluates several specs on shared parameter draws (one init serves every
// row, as a single table reproduction should).
std::vector<ScalingResult> run_suite(const std::vector<std::pair<std::string, corr::CorrelationSpec>>& rows,
                                     const ExperimentConfig& shared);

// CSV per result (n,mean,variance,stderr,count), JSON summary with bounds and
// slopes, and a gnuplot script referencing the CSVs. Returns written paths.
std::vector<std::string> emit_report(const std::vector<ScalingResult>& results,
                                     const std::string& out_dir, const std::string& config_echo);

}  // namespace widthlab::ensemble
