#include "widthlab/net/engine.hpp"

namespace widthlab::net {

Eigen::VectorXd hvp(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    const auto dual_grad = gradient(perturbed_view(p, v), x);
    Eigen::VectorXd out(dual_grad.size());
    for (Eigen::Index i = 0; i < dual_grad.size(); ++i) out(i) = dual_grad(i).d;
    return out;
}

double hessian_quadratic(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b) {
    return hvp(p, x, b).dot(a);
}

Eigen::VectorXd third_once_open(const ParamSet& p, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const auto dual_grad = gradient(perturbed_view2(p, a, b), x);
    Eigen::VectorXd out(dual_grad.size());
    for (Eigen::Index i = 0; i < dual_grad.size(); ++i) out(i) = dual_grad(i).d.d;
    return out;
}

double third_directional(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    return third_once_open(p, x, b, c).dot(a);
}

double directional_scalar(const ParamSet& p, const Eigen::VectorXd& x,
                          const std::vector<Eigen::VectorXd>& directions) {
    switch (directions.size()) {
        case 1: return gradient(p, x).dot(directions[0]);
        case 2: return hessian_quadratic(p, x, directions[0], directions[1]);
        case 3: return third_directional(p, x, directions[0], directions[1], directions[2]);
        default:
            throw UnsupportedOrder("directional order " + std::to_string(directions.size()) +
                                   " outside 1..3");
    }
}

double evaluate_Os(const ParamSet& p, int s, const std::vector<Eigen::VectorXd>& inputs) {
    if (s < 2 || s > 4) throw UnsupportedOrder("O_s defined here for s in 2..4");
    if (static_cast<int>(inputs.size()) != s) throw Error("O_s needs exactly s inputs");
    if (s == 4 && p.cfg.activation == Activation::relu)
        throw UnsupportedOrder("O_4 needs a thrice-differentiable activation");

    std::vector<Eigen::VectorXd> g;
    g.reserve(s);
    for (const auto& x : inputs) g.push_back(gradient(p, x));

    if (s == 2) return g[0].dot(g[1]);
    if (s == 3)
        return hvp(p, inputs[0], g[1]).dot(g[2]) + hvp(p, inputs[1], g[0]).dot(g[2]);

    // s = 4: derivative of O_3 contracted with the gradient at x_4
    const Eigen::VectorXd h1g2 = hvp(p, inputs[0], g[1]);
    const Eigen::VectorXd h1g3 = hvp(p, inputs[0], g[2]);
    const Eigen::VectorXd h2g1 = hvp(p, inputs[1], g[0]);
    const Eigen::VectorXd h2g3 = hvp(p, inputs[1], g[2]);
    const Eigen::VectorXd h3g4 = hvp(p, inputs[2], g[3]);
    const Eigen::VectorXd h2g4 = hvp(p, inputs[1], g[3]);
    const Eigen::VectorXd h1g4 = hvp(p, inputs[0], g[3]);
    return third_directional(p, inputs[0], g[1], g[2], g[3]) + h1g3.dot(h2g4) + h1g2.dot(h3g4) +
           third_directional(p, inputs[1], g[0], g[2], g[3]) + h2g3.dot(h1g4) + h2g1.dot(h3g4);
}

}  // namespace widthlab::net
