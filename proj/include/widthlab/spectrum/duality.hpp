#pragma once

#include "widthlab/spectrum/hessian.hpp"

namespace widthlab::spectrum {

// Both sides of tr(A^m) = tr(Theta^m) computed independently: the A side from
// the materialized P x P gradient outer-product matrix (BudgetError above
// max_params), the Theta side exactly from the M x M gram matrix.
struct DualityPair {
    double trace_A = 0.0;
    double trace_theta = 0.0;
};
DualityPair gram_duality(const net::ParamSet& params, const dynamics::TrainSet& train, int m,
                         int max_params = 5000);

// Hutchinson estimate of tr(op^m) with seeded Rademacher probes
double trace_hutchinson(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mv, int dim,
                        int m, int probes, std::uint64_t seed);

// matvec-only estimate of tr(A^m), no materialization
double trace_A_hutchinson(const HessianOps& ops, int m, int probes, std::uint64_t seed);

// Hutchinson estimate of tr(B^2) = E ||B v||^2
double trace_B2_hutchinson(const HessianOps& ops, int probes, std::uint64_t seed);

}  // namespace widthlab::spectrum
