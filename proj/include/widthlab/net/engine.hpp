#pragma once

#include <vector>

#include "widthlab/net/mlp.hpp"

namespace widthlab::net {

// H(x) v: gradient over theta + eps*v, eps parts extracted
Eigen::VectorXd hvp(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& v);

// sum_{mu nu} d^2f/dmu dnu a_mu b_nu
double hessian_quadratic(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b);

// T(x)[., a, b]: third derivative tensor contracted with two directions
Eigen::VectorXd third_once_open(const ParamSet& p, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& a, const Eigen::VectorXd& b);

double third_directional(const ParamSet& p, const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& c);

// Fully contracted directional derivative of order k in {1,2,3}:
//   sum d^k f . v_1 ... v_k
// relu second and third orders use the a.e. piecewise rule (the activation
// pattern is locally constant, so cross-layer parameter derivatives survive).
// Throws UnsupportedOrder for k outside 1..3.
double directional_scalar(const ParamSet& p, const Eigen::VectorXd& x,
                          const std::vector<Eigen::VectorXd>& directions);

// O_1 = f, O_s(x_1..x_s) = sum_mu dO_{s-1}/dmu . df(x_s)/dmu for s in {2,3,4}.
// O_2 is the tangent kernel. s = 4 needs a thrice-differentiable activation
// (UnsupportedOrder for relu).
double evaluate_Os(const ParamSet& p, int s, const std::vector<Eigen::VectorXd>& inputs);

}  // namespace widthlab::net
