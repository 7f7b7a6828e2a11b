#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "widthlab/errors.hpp"

namespace widthlab::dynamics {

struct TrainSet {
    Eigen::MatrixXd inputs;  // input_dim x M, one column per sample
    Eigen::VectorXd labels;  // +-1 for two-class tasks

    int size() const { return static_cast<int>(labels.size()); }
    int input_dim() const { return static_cast<int>(inputs.rows()); }
    Eigen::VectorXd point(int i) const { return inputs.col(i); }

    void validate() const;
};

// M/2 samples per class at +-center + gaussian noise, labels +-1
TrainSet synthetic_two_class(int size, int input_dim, std::uint64_t seed,
                             double center_scale = 2.0, double noise = 0.5);

}  // namespace widthlab::dynamics
