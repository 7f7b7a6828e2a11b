#include "widthlab/dynamics/tables.hpp"

#include "widthlab/net/engine.hpp"

namespace widthlab::dynamics {

NLOTables NLOTables::zeros(int M) {
    NLOTables t;
    t.M = M;
    t.theta = Eigen::MatrixXd::Zero(M, M);
    t.o11.assign(M, Eigen::MatrixXd::Zero(M, M));
    t.hh = Eigen::MatrixXd::Zero(M * M, M * M);
    t.t3.assign(M, std::vector<double>(M * M * M, 0.0));
    return t;
}

NLOTables nlo_tables(const net::ParamSet& params, const TrainSet& train,
                     const TableLimits& limits) {
    train.validate();
    if (params.cfg.activation == net::Activation::relu)
        throw UnsupportedOrder("correction tables need a thrice-differentiable activation");
    const int M = train.size();
    if (M > limits.max_trainset)
        throw BudgetError("train set size " + std::to_string(M) + " exceeds table cap " +
                          std::to_string(limits.max_trainset));
    const int P = params.param_count();

    NLOTables tables;
    tables.M = M;

    std::vector<Eigen::VectorXd> grads(M);
    for (int a = 0; a < M; ++a) grads[a] = net::gradient(params, train.point(a));

    tables.theta.resize(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = a; b < M; ++b)
            tables.theta(a, b) = tables.theta(b, a) = grads[a].dot(grads[b]);

    // H_a g_b stacked as columns a*M+b
    Eigen::MatrixXd hvps(P, M * M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            hvps.col(a * M + b) = net::hvp(params, train.point(a), grads[b]);

    tables.hh = hvps.transpose() * hvps;

    tables.o11.assign(M, Eigen::MatrixXd(M, M));
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            for (int c = b; c < M; ++c)
                tables.o11[a](b, c) = tables.o11[a](c, b) = hvps.col(a * M + b).dot(grads[c]);

    // third-order directional tables, symmetric in the direction triple
    tables.t3.assign(M, std::vector<double>(M * M * M, 0.0));
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
            for (int c = b; c < M; ++c) {
                const Eigen::VectorXd open =
                    net::third_once_open(params, train.point(a), grads[b], grads[c]);
                for (int e = c; e < M; ++e) {
                    const double v = open.dot(grads[e]);
                    auto& cube = tables.t3[a];
                    cube[(b * M + c) * M + e] = v;
                    cube[(b * M + e) * M + c] = v;
                    cube[(c * M + b) * M + e] = v;
                    cube[(c * M + e) * M + b] = v;
                    cube[(e * M + b) * M + c] = v;
                    cube[(e * M + c) * M + b] = v;
                }
            }
        }
    }
    return tables;
}

}  // namespace widthlab::dynamics
