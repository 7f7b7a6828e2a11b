#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "widthlab/rng.hpp"
#include "widthlab/spectrum/duality.hpp"
#include "widthlab/spectrum/scaling.hpp"

using namespace widthlab;
using namespace widthlab::spectrum;

namespace {

struct Setup {
    dynamics::TrainSet train;
    net::ParamSet params;
};

Setup make_setup(int width, int layers, net::Activation act, std::uint64_t seed, int M = 10,
                 int din = 10) {
    net::MLPConfig cfg;
    cfg.input_dim = din;
    cfg.width = width;
    cfg.hidden_layers = layers;
    cfg.activation = act;
    cfg.normalize_input = true;
    cfg.seed = seed;
    return {dynamics::synthetic_two_class(M, din, substream_seed(seed, 9)), net::init(cfg)};
}

Eigen::VectorXd random_probe(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.next_gaussian();
    return v;
}

}  // namespace

TEST_CASE("hessian split: symmetry, psd part, additivity") {
    const auto setup = make_setup(24, 2, net::Activation::tanh_, 3);
    HessianOps ops(setup.params, setup.train);
    const auto u = random_probe(ops.dim(), 1);
    const auto v = random_probe(ops.dim(), 2);
    CHECK(u.dot(ops.H_mv(v)) == doctest::Approx(v.dot(ops.H_mv(u))).epsilon(1e-10));
    CHECK(v.dot(ops.A_mv(v)) >= 0.0);
    CHECK((ops.A_mv(v) + ops.B_mv(v) - ops.H_mv(v)).norm() == doctest::Approx(0.0));
}

TEST_CASE("gram duality is exact for every moment") {
    const auto setup = make_setup(32, 2, net::Activation::tanh_, 5);
    for (int m = 1; m <= 4; ++m) {
        const auto pair = gram_duality(setup.params, setup.train, m);
        CHECK(pair.trace_A ==
              doctest::Approx(pair.trace_theta).epsilon(1e-10));
    }
    // first moment is the sum of kernel diagonal entries
    const auto pair = gram_duality(setup.params, setup.train, 1);
    HessianOps ops(setup.params, setup.train);
    CHECK(pair.trace_theta == doctest::Approx(ops.theta().trace()).epsilon(1e-12));
}

TEST_CASE("hutchinson estimate lands within three sigmas of the exact trace") {
    const auto setup = make_setup(16, 2, net::Activation::tanh_, 7, 8, 8);
    HessianOps ops(setup.params, setup.train);
    const int probes = 256;
    for (int m : {1, 2}) {
        const double exact = gram_duality(setup.params, setup.train, m).trace_A;
        // spread of the per-probe estimator measured empirically
        std::vector<double> singles(probes);
        for (int p = 0; p < probes; ++p)
            singles[p] = trace_A_hutchinson(ops, m, 1, substream_seed(1000, p));
        const auto stats = ensemble::sample_stats(singles);
        CHECK(std::abs(stats.mean - exact) <= 3.0 * stats.stderror + 1e-9);
    }
}

TEST_CASE("nonzero spectrum of the materialized A equals the kernel spectrum") {
    const auto setup = make_setup(12, 2, net::Activation::tanh_, 11, 6, 6);
    HessianOps ops(setup.params, setup.train);
    const int P = ops.dim();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(P, P);
    for (const auto& g : ops.gradients()) A += g * g.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> et(ops.theta());
    const int M = ops.train_size();
    // top M eigenvalues of A match the kernel's, the rest vanish
    for (int i = 0; i < M; ++i)
        CHECK(ea.eigenvalues()(P - 1 - i) ==
              doctest::Approx(et.eigenvalues()(M - 1 - i)).epsilon(1e-8));
    for (int i = 0; i < P - M; ++i) CHECK(std::abs(ea.eigenvalues()(i)) < 1e-8);
}

TEST_CASE("power iteration with deflation matches a dense eigensolve") {
    const auto setup = make_setup(10, 2, net::Activation::tanh_, 13, 6, 6);
    HessianOps ops(setup.params, setup.train);
    const int P = ops.dim();
    Eigen::MatrixXd H(P, P);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(P);
    for (int j = 0; j < P; ++j) {
        e(j) = 1.0;
        H.col(j) = ops.H_mv(e);
        e(j) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const auto top = top_eigenvalues([&](const Eigen::VectorXd& v) { return ops.H_mv(v); }, P, 3,
                                     99, 4000, 1e-13);
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + P);
    std::sort(dense.begin(), dense.end(), [](double a, double b) { return a > b; });
    for (int i = 0; i < 3; ++i) CHECK(top[i] == doctest::Approx(dense[i]).epsilon(1e-6));
}

TEST_CASE("curvature part is traceless for piecewise-linear activations") {
    for (auto act : {net::Activation::linear, net::Activation::relu}) {
        const auto setup = make_setup(10, 2, act, 17, 6, 6);
        HessianOps ops(setup.params, setup.train);
        const int P = ops.dim();
        double trace = 0.0;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(P);
        for (int j = 0; j < P; ++j) {
            e(j) = 1.0;
            trace += ops.B_mv(e)(j);
            e(j) = 0.0;
        }
        CHECK(trace == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("budget guard on the materialized duality check") {
    const auto setup = make_setup(80, 2, net::Activation::tanh_, 19, 6, 8);
    CHECK_THROWS_AS(gram_duality(setup.params, setup.train, 2, 1000), BudgetError);
}
