#pragma once

#include <vector>

#include "widthlab/dynamics/trainset.hpp"
#include "widthlab/net/mlp.hpp"

namespace widthlab::dynamics {

// Contraction tables over the train set feeding the 1/n correction formulas.
// Everything is assembled from four primitives over cached gradients g_a:
//   theta(a,b)   = g_a . g_b
//   o11[a](b,c)  = (H_a g_b) . g_c                       (symmetric in b,c)
//   hh(a,b;c,e)  = (H_a g_b) . (H_c g_e)
//   t3[a](b,c,e) = third derivative at x_a against g_b, g_c, g_e (symmetric)
struct NLOTables {
    int M = 0;
    Eigen::MatrixXd theta;
    std::vector<Eigen::MatrixXd> o11;       // per a: M x M
    Eigen::MatrixXd hh;                     // (a*M+b) x (c*M+e)
    std::vector<std::vector<double>> t3;    // per a: flat M^3 cube

    double t3v(int a, int b, int c, int e) const { return t3[a][(b * M + c) * M + e]; }

    // O_3(x_a, x_b, x_c): drives the kernel's time derivative
    double O3(int a, int b, int c) const { return o11[a](b, c) + o11[b](a, c); }

    // O_4(x_a, x_b, x_c, x_e)
    double O4(int a, int b, int c, int e) const {
        return t3v(a, b, c, e) + t3v(b, a, c, e) + hh(a * M + c, b * M + e) +
               hh(a * M + b, c * M + e) + hh(b * M + c, a * M + e) + hh(b * M + a, c * M + e);
    }

    // second parameter derivative of the kernel entry (a,b) against g_c, g_e
    double D2Theta(int a, int b, int c, int e) const {
        return t3v(a, b, c, e) + t3v(b, a, c, e) + hh(a * M + c, b * M + e) +
               hh(a * M + e, b * M + c);
    }

    // O_{1,1}(x_a, x_b, x_c) = sum d^2f(x_a) . g_b g_c
    double O11(int a, int b, int c) const { return o11[a](b, c); }

    // parameter derivative of O_{1,1} contracted with g_e
    double O11d(int a, int b, int c, int e) const {
        return t3v(a, b, c, e) + hh(a * M + b, c * M + e) + hh(a * M + c, b * M + e);
    }

    // zero tables of the same shape (turns every correction off)
    static NLOTables zeros(int M);
};

struct TableLimits {
    int max_trainset = 20;
};

// Computes the full tables; needs a thrice-differentiable activation
// (UnsupportedOrder for relu) and throws BudgetError beyond the size cap.
NLOTables nlo_tables(const net::ParamSet& params, const TrainSet& train,
                     const TableLimits& limits = {});

}  // namespace widthlab::dynamics
