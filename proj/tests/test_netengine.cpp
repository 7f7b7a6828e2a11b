#include <doctest.h>

#include <cmath>

#include "widthlab/corr/parse.hpp"
#include "widthlab/net/engine.hpp"
#include "widthlab/net/plan.hpp"
#include "widthlab/presets.hpp"
#include "widthlab/rng.hpp"

using namespace widthlab;
using net::Activation;
using net::MLPConfig;

namespace {

MLPConfig make_cfg(int width, int layers, Activation act, std::uint64_t seed, int din = 4) {
    MLPConfig cfg;
    cfg.input_dim = din;
    cfg.width = width;
    cfg.hidden_layers = layers;
    cfg.activation = act;
    cfg.seed = seed;
    return cfg;
}

Eigen::VectorXd random_vec(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.next_gaussian();
    return v;
}

}  // namespace

TEST_CASE("init: gaussian moments") {
    auto cfg = make_cfg(1000, 2, Activation::linear, 11, 1);
    const auto p = net::init(cfg);  // P = 1000 + 1e6 + 1000 draws
    const Eigen::VectorXd theta = p.flatten();
    const double mean = theta.mean();
    const double var = (theta.array() - mean).square().sum() / (theta.size() - 1);
    const double sigma_mean = 1.0 / std::sqrt(double(theta.size()));
    CHECK(std::abs(mean) < 4 * sigma_mean);
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("init: rademacher takes only +-1") {
    auto cfg = make_cfg(32, 2, Activation::linear, 5);
    cfg.init = net::InitKind::rademacher;
    const auto p = net::init(cfg);
    const Eigen::VectorXd theta = p.flatten();
    bool saw_plus = false, saw_minus = false;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        CHECK(std::abs(theta(i)) == 1.0);
        (theta(i) > 0 ? saw_plus : saw_minus) = true;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
}

TEST_CASE("init: determinism and parameter dump round trip") {
    const auto cfg = make_cfg(16, 3, Activation::tanh_, 1234);
    const auto a = net::init(cfg);
    const auto b = net::init(cfg);
    CHECK(a.flatten() == b.flatten());

    net::save_params(a, "params_roundtrip.bin");
    const auto c = net::load_params("params_roundtrip.bin");
    CHECK(a.flatten() == c.flatten());
}

TEST_CASE("forward: unit width identity") {
    MLPConfig cfg = make_cfg(1, 1, Activation::linear, 0, 4);
    net::ParamSet p;
    p.cfg = cfg;
    p.U = Eigen::MatrixXd::Ones(1, 4);
    p.V = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
    x(0) = 1.0;
    CHECK(net::forward_value(p, x) == doctest::Approx(1.0));
}

TEST_CASE("forward: linear homogeneity and tanh bound") {
    const auto p = net::init(make_cfg(24, 2, Activation::linear, 3));
    const auto x = random_vec(4, 17);
    CHECK(net::forward_value(p, 3.5 * x) ==
          doctest::Approx(3.5 * net::forward_value(p, x)).epsilon(1e-12));

    auto cfg_t = make_cfg(24, 2, Activation::tanh_, 3);
    const auto pt = net::init(cfg_t);
    const double bound = pt.V.cwiseAbs().sum() / std::sqrt(24.0);
    CHECK(std::abs(net::forward_value(pt, 100.0 * x)) <= bound + 1e-12);
}

TEST_CASE("gradient matches finite differences") {
    for (auto act : {Activation::linear, Activation::tanh_, Activation::relu}) {
        for (int width : {4, 16}) {
            const auto p = net::init(make_cfg(width, 2, act, 7 + width));
            const auto x = random_vec(4, 21);
            const auto g = net::gradient(p, x);
            const auto v = random_vec(p.param_count(), 31);
            const double h = 1e-4;
            net::ParamSet plus = p, minus = p;
            plus.add_scaled(v, h);
            minus.add_scaled(v, -h);
            const double fd = (net::forward_value(plus, x) - net::forward_value(minus, x)) / (2 * h);
            CHECK(g.dot(v) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("linear depth-1 gradient wrt output weights is the hidden activity") {
    const auto p = net::init(make_cfg(8, 1, Activation::linear, 77));
    const auto x = random_vec(4, 5);
    const auto g = net::gradient(p, x);
    const Eigen::VectorXd expect = (p.U * x) / std::sqrt(8.0);
    const int v_offset = 8 * 4;
    for (int i = 0; i < 8; ++i) CHECK(g(v_offset + i) == doctest::Approx(expect(i)).epsilon(1e-12));
}

TEST_CASE("kernel diagonal is nonnegative") {
    const auto p = net::init(make_cfg(12, 2, Activation::tanh_, 9));
    const auto x = random_vec(4, 2);
    CHECK(net::gradient(p, x).squaredNorm() >= 0.0);
}

TEST_CASE("hessian-vector products match finite differences of the gradient") {
    for (auto act : {Activation::linear, Activation::tanh_}) {
        const auto p = net::init(make_cfg(16, 2, act, 13));
        const auto x = random_vec(4, 3);
        const auto v = random_vec(p.param_count(), 4);
        const auto hv = net::hvp(p, x, v);
        const double h = 1e-4;
        net::ParamSet plus = p, minus = p;
        plus.add_scaled(v, h);
        minus.add_scaled(v, -h);
        const Eigen::VectorXd fd = (net::gradient(plus, x) - net::gradient(minus, x)) / (2 * h);
        CHECK((hv - fd).norm() <= 1e-4 * (1.0 + fd.norm()));
    }
}

TEST_CASE("third order matches finite differences of the hessian quadratic") {
    const auto p = net::init(make_cfg(16, 2, Activation::tanh_, 23));
    const auto x = random_vec(4, 6);
    const auto u = random_vec(p.param_count(), 7);
    const auto v = random_vec(p.param_count(), 8);
    const auto w = random_vec(p.param_count(), 9);
    const double t3 = net::third_directional(p, x, u, v, w);
    const double h = 1e-4;
    net::ParamSet plus = p, minus = p;
    plus.add_scaled(w, h);
    minus.add_scaled(w, -h);
    const double fd =
        (net::hessian_quadratic(plus, x, u, v) - net::hessian_quadratic(minus, x, u, v)) / (2 * h);
    CHECK(t3 == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("mixed partials commute") {
    const auto p = net::init(make_cfg(12, 3, Activation::tanh_, 29));
    const auto x = random_vec(4, 10);
    const auto u = random_vec(p.param_count(), 11);
    const auto v = random_vec(p.param_count(), 12);
    const double a = net::directional_scalar(p, x, {u, v});
    const double b = net::directional_scalar(p, x, {v, u});
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("derivatives beyond the polynomial degree vanish for linear nets") {
    // depth 1: f is quadratic in the parameters, third derivative is zero
    const auto p = net::init(make_cfg(10, 1, Activation::linear, 31));
    const auto x = random_vec(4, 13);
    const auto u = random_vec(p.param_count(), 14);
    const auto v = random_vec(p.param_count(), 15);
    const auto w = random_vec(p.param_count(), 16);
    CHECK(net::third_directional(p, x, u, v, w) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("directional order outside 1..3 is rejected") {
    const auto p = net::init(make_cfg(8, 2, Activation::tanh_, 37));
    const auto x = random_vec(4, 17);
    CHECK_THROWS_AS(net::directional_scalar(p, x, {}), UnsupportedOrder);
    const auto v = random_vec(p.param_count(), 18);
    CHECK_THROWS_AS(net::directional_scalar(p, x, {v, v, v, v}), UnsupportedOrder);
}

TEST_CASE("plan for the kernel spec is two gradients and a dot") {
    const auto spec = corr::parse("E[ d(m) f(x1) d(m) f(x2) ]");
    const auto plan = net::compile(spec);
    int grads = 0, dots = 0;
    for (const auto& s : plan.steps) {
        grads += s.kind == net::EvalPlan::Kind::grad;
        dots += s.kind == net::EvalPlan::Kind::dot;
    }
    CHECK(grads == 2);
    CHECK(dots == 1);

    const auto p = net::init(make_cfg(16, 2, Activation::tanh_, 41));
    net::InputMap inputs{{"x1", random_vec(4, 19)}, {"x2", random_vec(4, 20)}};
    const double value = net::evaluate_with_plan(plan, spec, p, inputs);
    const double direct =
        net::gradient(p, inputs.at("x1")).dot(net::gradient(p, inputs.at("x2")));
    CHECK(value == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("plan for the mixed row contracts through the hessian") {
    const auto spec = corr::parse("E[ d(m) f(x1) d(n) f(x2) d(m,n) f(x3) f(x4) ]");
    const auto p = net::init(make_cfg(12, 2, Activation::tanh_, 43));
    net::InputMap inputs;
    for (int i = 1; i <= 4; ++i) inputs["x" + std::to_string(i)] = random_vec(4, 100 + i);
    const double value = net::evaluate(spec, p, inputs);
    const double manual = net::hessian_quadratic(p, inputs.at("x3"), net::gradient(p, inputs.at("x1")),
                                                 net::gradient(p, inputs.at("x2"))) *
                          net::forward_value(p, inputs.at("x4"));
    CHECK(value == doctest::Approx(manual).epsilon(1e-11));
}

TEST_CASE("hessian chains resolve through once-open steps") {
    // g(x3)^T H(x1) H(x2) g(x4)
    const auto spec = corr::parse("E[ d(m,n) f(x1) d(n,p) f(x2) d(m) f(x3) d(p) f(x4) ]");
    const auto plan = net::compile(spec);
    bool has_once_open = false;
    for (const auto& s : plan.steps) has_once_open |= s.kind == net::EvalPlan::Kind::once_open;
    CHECK(has_once_open);

    const auto p = net::init(make_cfg(10, 2, Activation::tanh_, 47));
    net::InputMap inputs;
    for (int i = 1; i <= 4; ++i) inputs["x" + std::to_string(i)] = random_vec(4, 200 + i);
    const double value = net::evaluate_with_plan(plan, spec, p, inputs);
    const double manual = net::hvp(p, inputs.at("x1"), net::hvp(p, inputs.at("x2"),
                                                                net::gradient(p, inputs.at("x4"))))
                              .dot(net::gradient(p, inputs.at("x3")));
    CHECK(value == doctest::Approx(manual).epsilon(1e-11));
}

TEST_CASE("frobenius contraction of two hessians cannot be planned") {
    const auto spec = corr::parse("E[ d(m,n) f(x1) d(m,n) f(x2) ]");
    CHECK_THROWS_AS(net::compile(spec), CyclicContraction);

    // the evaluation falls back to materialized tensors
    const auto p = net::init(make_cfg(6, 1, Activation::tanh_, 53, 3));
    net::InputMap inputs{{"x1", random_vec(3, 301)}, {"x2", random_vec(3, 302)}};
    const double value = net::evaluate(spec, p, inputs);

    const int P = p.param_count();
    Eigen::MatrixXd H1(P, P), H2(P, P);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(P);
    for (int j = 0; j < P; ++j) {
        e(j) = 1.0;
        H1.col(j) = net::hvp(p, inputs.at("x1"), e);
        H2.col(j) = net::hvp(p, inputs.at("x2"), e);
        e(j) = 0.0;
    }
    CHECK(value == doctest::Approx(H1.cwiseProduct(H2).sum()).epsilon(1e-10));
}

TEST_CASE("plan and materialization agree on every built-in row") {
    const auto p = net::init(make_cfg(8, 2, Activation::tanh_, 59));
    net::InputMap inputs;
    for (int i = 1; i <= 6; ++i) inputs["x" + std::to_string(i)] = random_vec(4, 400 + i);
    for (const auto& [name, spec] : builtin_rows()) {
        const double planned = net::evaluate_with_plan(net::compile(spec), spec, p, inputs);
        const double brute = net::materialize_value(spec, p, inputs);
        INFO(name);
        CHECK(planned == doctest::Approx(brute).epsilon(1e-10));
    }
}

TEST_CASE("materialization budget") {
    const auto spec = corr::parse("E[ d(m) f(x1) d(n) f(x2) d(p) f(x3) d(m,n,p) f(x4) ]");
    const auto p = net::init(make_cfg(64, 2, Activation::tanh_, 61));
    net::InputMap inputs;
    for (int i = 1; i <= 4; ++i) inputs["x" + std::to_string(i)] = random_vec(4, 500 + i);
    net::MaterializeLimits limits;
    limits.max_elements = 1000;  // P^3 far beyond this
    CHECK_THROWS_AS(net::materialize_value(spec, p, inputs, limits), BudgetError);
}

TEST_CASE("O_s values") {
    const auto p = net::init(make_cfg(8, 2, Activation::tanh_, 67));
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_vec(4, 600 + i));

    // O_2 is the kernel
    CHECK(net::evaluate_Os(p, 2, {xs[0], xs[1]}) ==
          doctest::Approx(net::gradient(p, xs[0]).dot(net::gradient(p, xs[1]))).epsilon(1e-12));

    // O_3 symmetric in its first two arguments
    const double o3a = net::evaluate_Os(p, 3, {xs[0], xs[1], xs[2]});
    const double o3b = net::evaluate_Os(p, 3, {xs[1], xs[0], xs[2]});
    CHECK(o3a == doctest::Approx(o3b).epsilon(1e-10));

    // O_4 against the sum of its six contraction patterns evaluated
    // independently through the spec pipeline
    const double o4 = net::evaluate_Os(p, 4, xs);
    net::InputMap inputs;
    for (int i = 0; i < 4; ++i) inputs["x" + std::to_string(i + 1)] = xs[i];
    const char* patterns[] = {
        "E[ d(m,n,p) f(x1) d(m) f(x2) d(n) f(x3) d(p) f(x4) ]",
        "E[ d(m) f(x1) d(m,n,p) f(x2) d(n) f(x3) d(p) f(x4) ]",
        "E[ d(m,n) f(x1) d(m,p) f(x2) d(n) f(x3) d(p) f(x4) ]",
        "E[ d(m,n) f(x1) d(n) f(x2) d(m,p) f(x3) d(p) f(x4) ]",
        "E[ d(m,p) f(x1) d(m,n) f(x2) d(n) f(x3) d(p) f(x4) ]",
        "E[ d(n) f(x1) d(m,n) f(x2) d(m,p) f(x3) d(p) f(x4) ]",
    };
    double total = 0.0;
    for (const char* text : patterns) total += net::evaluate(corr::parse(text), p, inputs);
    CHECK(o4 == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("O_4 for a depth-1 linear net: third-order term vanishes identically") {
    const auto p = net::init(make_cfg(8, 1, Activation::linear, 71));
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_vec(4, 700 + i));
    const double o4 = net::evaluate_Os(p, 4, xs);
    // with T3 = 0 only the four hessian-hessian dots remain
    std::vector<Eigen::VectorXd> g;
    for (const auto& x : xs) g.push_back(net::gradient(p, x));
    const double manual = net::hvp(p, xs[0], g[2]).dot(net::hvp(p, xs[1], g[3])) +
                          net::hvp(p, xs[0], g[1]).dot(net::hvp(p, xs[2], g[3])) +
                          net::hvp(p, xs[1], g[2]).dot(net::hvp(p, xs[0], g[3])) +
                          net::hvp(p, xs[1], g[0]).dot(net::hvp(p, xs[2], g[3]));
    CHECK(o4 == doctest::Approx(manual).epsilon(1e-10));
    CHECK_THROWS_AS(net::evaluate_Os(net::init(make_cfg(8, 1, Activation::relu, 71)), 4,
                                     {xs[0], xs[1], xs[2], xs[3]}),
                    UnsupportedOrder);
}
