#pragma once

#include <vector>

#include "widthlab/dynamics/trainset.hpp"
#include "widthlab/net/mlp.hpp"

namespace widthlab::dynamics {

// Tangent kernel at initialization together with its eigendecomposition and
// the initial residual; the basis everything downstream works in.
struct KernelState {
    Eigen::MatrixXd theta0;       // M x M gram of parameter gradients
    Eigen::VectorXd eigenvalues;  // descending, clipped at 0
    Eigen::MatrixXd eigenvectors; // columns, orthonormal
    Eigen::VectorXd f0;           // network values on the train set
    Eigen::VectorXd residual0;    // f0 - y

    int size() const { return static_cast<int>(f0.size()); }
    double lambda_max() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
    // eigenvalues below 1e-10 * lambda_max count as exactly zero
    double zero_threshold() const { return 1e-10 * lambda_max(); }
    bool degenerate() const { return eigenvalues(size() - 1) <= zero_threshold(); }

    Eigen::VectorXd project(const Eigen::VectorXd& v) const { return eigenvectors.transpose() * v; }
    Eigen::VectorXd unproject(const Eigen::VectorXd& c) const { return eigenvectors * c; }
};

KernelState kernel_state(const net::ParamSet& params, const TrainSet& train);

}  // namespace widthlab::dynamics
