#pragma once

#include <vector>

#include "widthlab/dynamics/trainset.hpp"
#include "widthlab/net/mlp.hpp"

namespace widthlab::spectrum {

// Implicit matrix-vector operators for the MSE loss Hessian over parameter
// space and its two pieces: the gradient outer-product part A and the
// residual-weighted curvature part B, with H v = A v + B v.
class HessianOps {
  public:
    HessianOps(const net::ParamSet& params, const dynamics::TrainSet& train);

    int dim() const { return static_cast<int>(grads_[0].size()); }
    int train_size() const { return static_cast<int>(residual_.size()); }

    Eigen::VectorXd A_mv(const Eigen::VectorXd& v) const;
    Eigen::VectorXd B_mv(const Eigen::VectorXd& v) const;
    Eigen::VectorXd H_mv(const Eigen::VectorXd& v) const;

    const std::vector<Eigen::VectorXd>& gradients() const { return grads_; }
    const Eigen::VectorXd& residual() const { return residual_; }

    // M x M gram of the gradients (the kernel on the train set)
    Eigen::MatrixXd theta() const;

  private:
    const net::ParamSet& params_;
    const dynamics::TrainSet& train_;
    std::vector<Eigen::VectorXd> grads_;
    Eigen::VectorXd residual_;
};

// deterministic power iteration with deflation against previously found
// eigenvectors; returns the top-k eigenvalues (by magnitude) of the operator
std::vector<double> top_eigenvalues(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mv,
                                    int dim, int k, std::uint64_t seed, int iterations = 200,
                                    double tol = 1e-10);

}  // namespace widthlab::spectrum
