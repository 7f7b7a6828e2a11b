#pragma once

#include <optional>

#include "widthlab/dynamics/trajectory.hpp"
#include "widthlab/dynamics/trainset.hpp"
#include "widthlab/net/mlp.hpp"

namespace widthlab::dynamics {

struct TrainOptions {
    double eta = 0.1;
    int steps = 100;
    int record_every = 1;
    int batch = 0;              // 0: full-batch gradient descent, else SGD batch size
    std::uint64_t batch_seed = 0;
    std::vector<std::pair<int, int>> tracked;
    double divergence_loss = 1e6;
};

// MSE training loop; records f on the train set and tracked kernel entries.
// Batches are drawn without replacement from a seeded stream. Modifies
// `params` in place (final state after the last step). Throws StabilityError
// on divergence.
Trajectory train(net::ParamSet& params, const TrainSet& trainset, const TrainOptions& opts);

double mse_loss(const net::ParamSet& params, const TrainSet& trainset);

}  // namespace widthlab::dynamics
