#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "widthlab/corr/spec.hpp"
#include "widthlab/rational.hpp"

namespace widthlab::feynman {

// product of Gram entries: sorted multiset of index pairs (a <= b)
using GramMonomial = std::vector<std::pair<int, int>>;

// Exact value of a small deep-linear correlation function: a Laurent
// polynomial in the width n whose coefficients are integer combinations of
// Gram monomials. All arithmetic is exact; no floating point enters until
// the polynomial is evaluated.
struct ExactLinearValue {
    // n-power -> (monomial -> integer coefficient)
    std::map<int, std::map<GramMonomial, std::int64_t>> terms;

    int leading_power() const;
    double eval(double n, const Eigen::MatrixXd& gram) const;
    // coefficient polynomial of one power, evaluated on the gram matrix
    double coefficient(int power, const Eigen::MatrixXd& gram) const;
    std::string str() const;
};

struct ExactLimits {
    int max_tensors = 4;
    int max_depth = 2;
};

// Wick evaluation over individual weight entries of a depth-d linear network:
// every placement of the derivative slots across layers, joint with every
// per-layer pairing of the remaining weight factors, with the Kronecker-delta
// index bookkeeping done exactly (contracted derivatives force their deltas).
// Throws SizeError beyond the configured limits, NotEnumerable for
// self-contractions.
ExactLinearValue exact_eval(const corr::CorrelationSpec& spec, int depth,
                            const ExactLimits& limits = {});

}  // namespace widthlab::feynman
