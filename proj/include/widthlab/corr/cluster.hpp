#pragma once

#include <vector>

#include "widthlab/corr/spec.hpp"
#include "widthlab/rational.hpp"

namespace widthlab::corr {

// Connected components of the cluster graph (vertices = tensors, one edge per
// contracted tensor pair) and the resulting width exponent.
struct ClusterReport {
    std::vector<std::vector<int>> components;  // vertex sets
    int n_even = 0;
    int n_odd = 0;
    int m = 0;
    Rational s_C;  // n_even + n_odd/2 - m/2
};

ClusterReport cluster_graph(const CorrelationSpec& spec);

// exponent of Var[integrand]: 2 * s_C
Rational variance_exponent(const CorrelationSpec& spec);

// closed-form exponent for component counts (used by property tests)
inline Rational cluster_exponent(int n_even, int n_odd, int m) {
    return Rational(n_even) + Rational(n_odd, 2) - Rational(m, 2);
}

}  // namespace widthlab::corr
