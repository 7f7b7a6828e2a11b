#pragma once

#include <optional>
#include <string>

#include "widthlab/dynamics/solver.hpp"
#include "widthlab/dynamics/train.hpp"
#include "widthlab/ensemble/stats.hpp"

namespace widthlab::dynamics {

struct DynamicsNet {
    net::Activation activation = net::Activation::tanh_;
    int hidden_layers = 2;
    int input_dim = 16;
    bool normalize_input = true;  // on for all training experiments
};

// ---- kernel deviation vs width (constancy of the kernel during training) ---

struct DeviationScanConfig {
    DynamicsNet net;
    std::vector<int> widths = {64, 128, 256, 512};
    int seeds_per_width = 8;
    int trainset_size = 20;
    double eta = 0.1;
    int steps = 200;
    int batch = 0;  // 0: full-batch, else SGD batch size
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::optional<TrainSet> dataset;  // overrides the synthetic default
};

struct DeviationScan {
    std::vector<double> widths;
    std::vector<double> mean_deviation;  // mean |Theta(t*) - Theta(0)| over seeds and entries
    ensemble::SlopeFit fit;
};

DeviationScan ntk_deviation_scan(const DeviationScanConfig& config);

// ---- empirical vs predicted trajectories -----------------------------------

struct ComparisonConfig {
    DynamicsNet net;
    int width = 256;
    int trainset_size = 10;
    double eta = 0.05;
    int steps = 400;
    int record_every = 10;
    std::uint64_t seed = 1;
    std::vector<std::pair<int, int>> tracked = {{0, 1}, {0, 0}};
    std::optional<TrainSet> dataset;  // overrides the synthetic default
};

struct ComparisonResult {
    Trajectory empirical;
    Trajectory lo;
    Trajectory nlo;
    CompareMetrics lo_metrics;
    CompareMetrics nlo_metrics;
    double f_improvement = 0.0;      // lo rms / nlo rms for the map
    double theta_improvement = 0.0;  // same for the kernel entries
};

// trains the finite network and compares against discrete LO/NLO predictions
// on the same step grid
ComparisonResult trajectory_comparison(const ComparisonConfig& config);

// ---- one-step linearity of the update in the learning rate -----------------

struct LinearityScanConfig {
    DynamicsNet net;
    std::vector<int> widths = {64, 128, 256, 512};
    int seeds_per_width = 16;
    int trainset_size = 10;
    double eta = 0.2;
    int batch = 0;
    std::uint64_t master_seed = 1;
    int workers = 1;
};

struct LinearityScan {
    std::vector<double> widths;
    std::vector<double> mean_residual;  // ||f_1 - f_0 + eta Theta0 (f_0 - y)|| per width
    ensemble::SlopeFit fit;
};

LinearityScan sgd_linearity_scan(const LinearityScanConfig& config);

// trajectory CSV: t,kind,index,value with kind in {f,theta}_{emp,lo,nlo}
std::string trajectories_to_csv(const ComparisonResult& result);
std::string metrics_to_json(const ComparisonResult& result);

}  // namespace widthlab::dynamics
