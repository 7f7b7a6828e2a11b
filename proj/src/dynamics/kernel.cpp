#include "widthlab/dynamics/kernel.hpp"

#include <Eigen/Eigenvalues>

namespace widthlab::dynamics {

KernelState kernel_state(const net::ParamSet& params, const TrainSet& train) {
    train.validate();
    const int M = train.size();
    KernelState state;
    state.f0.resize(M);
    std::vector<Eigen::VectorXd> grads(M);
    for (int a = 0; a < M; ++a) {
        state.f0(a) = net::forward_value(params, train.point(a));
        grads[a] = net::gradient(params, train.point(a));
    }
    state.theta0.resize(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = a; b < M; ++b) state.theta0(a, b) = state.theta0(b, a) = grads[a].dot(grads[b]);
    state.residual0 = state.f0 - train.labels;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state.theta0);
    if (solver.info() != Eigen::Success) throw Error("kernel eigendecomposition failed");
    // descending order, gram eigenvalues clipped at zero
    state.eigenvalues = solver.eigenvalues().reverse();
    state.eigenvectors = solver.eigenvectors().rowwise().reverse();
    for (int i = 0; i < M; ++i)
        if (state.eigenvalues(i) < 0) state.eigenvalues(i) = 0.0;
    return state;
}

}  // namespace widthlab::dynamics
