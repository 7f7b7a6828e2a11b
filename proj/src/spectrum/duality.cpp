#include "widthlab/spectrum/duality.hpp"

#include "widthlab/rng.hpp"

namespace widthlab::spectrum {

DualityPair gram_duality(const net::ParamSet& params, const dynamics::TrainSet& train, int m,
                         int max_params) {
    if (m < 1 || m > 4) throw Error("moment order must be 1..4");
    const int P = params.param_count();
    if (P > max_params)
        throw BudgetError("parameter count " + std::to_string(P) +
                          " exceeds materialization cap " + std::to_string(max_params));
    HessianOps ops(params, train);

    DualityPair pair;
    // Theta side: exact powers of the M x M gram
    {
        const Eigen::MatrixXd theta = ops.theta();
        Eigen::MatrixXd power = theta;
        for (int i = 1; i < m; ++i) power = power * theta;
        pair.trace_theta = power.trace();
    }
    // A side: materialized P x P outer-product matrix
    {
        const auto& grads = ops.gradients();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(P, P);
        for (const auto& g : grads) A.selfadjointView<Eigen::Lower>().rankUpdate(g);
        A.triangularView<Eigen::StrictlyUpper>() = A.transpose();
        if (m == 1) {
            pair.trace_A = A.trace();
        } else if (m == 2) {
            pair.trace_A = A.squaredNorm();
        } else {
            const Eigen::MatrixXd A2 = A * A;
            pair.trace_A = m == 3 ? A2.cwiseProduct(A).sum() : A2.squaredNorm();
        }
    }
    return pair;
}

double trace_hutchinson(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mv, int dim,
                        int m, int probes, std::uint64_t seed) {
    if (m < 1 || m > 4) throw Error("moment order must be 1..4");
    SplitMix64 rng(seed);
    double acc = 0.0;
    for (int p = 0; p < probes; ++p) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = rng.next_rademacher();
        Eigen::VectorXd u = v;
        for (int k = 0; k < m; ++k) u = mv(u);
        acc += v.dot(u);
    }
    return acc / probes;
}

double trace_A_hutchinson(const HessianOps& ops, int m, int probes, std::uint64_t seed) {
    return trace_hutchinson([&](const Eigen::VectorXd& v) { return ops.A_mv(v); }, ops.dim(), m,
                            probes, seed);
}

double trace_B2_hutchinson(const HessianOps& ops, int probes, std::uint64_t seed) {
    SplitMix64 rng(seed);
    double acc = 0.0;
    for (int p = 0; p < probes; ++p) {
        Eigen::VectorXd v(ops.dim());
        for (int i = 0; i < ops.dim(); ++i) v(i) = rng.next_rademacher();
        acc += ops.B_mv(v).squaredNorm();
    }
    return acc / probes;
}

}  // namespace widthlab::spectrum
