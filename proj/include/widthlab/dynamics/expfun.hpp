#pragma once

#include <cmath>

namespace widthlab::dynamics {

// Iterated exponential integrals on [0, t] and their confluent limits. Rates
// may be zero or nearly equal; every branch below avoids the catastrophic
// cancellations of the naive closed forms.

// partial sum 1 + x + ... + x^p / p!
inline double exp_partial_sum(double x, int p) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= p; ++k) {
        term *= x / k;
        sum += term;
    }
    return sum;
}

// J_p(r, t) = integral of tau^p e^{-r tau} over [0, t], p in 0..4
inline double expint_poly(int p, double r, double t) {
    const double x = r * t;
    if (std::abs(x) < 0.5) {
        // series sum_k (-x)^k t^{p+1} / (k! (p+k+1))
        double term = 1.0, sum = 1.0 / (p + 1);
        for (int k = 1; k < 40; ++k) {
            term *= -x / k;
            const double add = term / (p + k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return std::pow(t, p + 1) * sum;
    }
    double factorial = 1.0;
    for (int k = 2; k <= p; ++k) factorial *= k;
    return factorial / std::pow(r, p + 1) * (1.0 - std::exp(-x) * exp_partial_sum(x, p));
}

// E1(r, t) = J_0
inline double expint_e1(double r, double t) { return expint_poly(0, r, t); }

// Phi2(x, y, t) = integral over t >= t1 >= t2 >= 0 of e^{-x t1 - y t2};
// equals (E1(x,t) - E1(x+y,t)) / y, with the midpoint rule when y*t is small
inline double expint_phi2(double x, double y, double t) {
    if (std::abs(y * t) < 1e-3) return expint_poly(1, x + 0.5 * y, t);
    return (expint_e1(x, t) - expint_e1(x + y, t)) / y;
}

// e^{-s t} J_p(r, t) with s >= 0 and s + r >= 0: the discount keeps every
// intermediate bounded even when r is negative
inline double expint_poly_discounted(int p, double r, double t, double s) {
    const double x = r * t;
    if (std::abs(x) < 0.5) {
        double term = 1.0, sum = 1.0 / (p + 1);
        for (int k = 1; k < 40; ++k) {
            term *= -x / k;
            const double add = term / (p + k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return std::exp(-s * t) * std::pow(t, p + 1) * sum;
    }
    double factorial = 1.0;
    for (int k = 2; k <= p; ++k) factorial *= k;
    return factorial / std::pow(r, p + 1) *
           (std::exp(-s * t) - std::exp(-(s + r) * t) * exp_partial_sum(x, p));
}

}  // namespace widthlab::dynamics
