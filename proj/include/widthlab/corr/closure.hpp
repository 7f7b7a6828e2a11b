#pragma once

#include <vector>

#include "widthlab/corr/spec.hpp"

namespace widthlab::corr {

// Which factor of the per-sample loss gradient (f(x') - y') a symbolic
// derivative term carries: the network-value part keeps a rank-0 tensor at
// the train point, the label part replaces it with the constant y'.
enum class CoefficientRole { network_value, label };

struct DerivativeTerm {
    CoefficientRole role;
    int train_point = 0;   // which train label the term references
    CorrelationSpec spec;  // the integrand of the term
};

// Symbolic expansion of d/dt of the integrand under MSE gradient flow: for
// every tensor and every train point, one contracted-derivative pair is added
// joining that tensor to a fresh rank-1 tensor at the train-point label; the
// network_value role additionally appends a rank-0 tensor at the same label.
// Every produced spec satisfies s_C(term) <= s_C(input).
std::vector<DerivativeTerm> time_derivative_specs(const CorrelationSpec& spec, int trainset_size);

// Symbolic one-step SGD replacement with the Taylor truncation of a depth-d
// network: each tensor is independently expanded to order k in {0..depth+1},
// gaining k extra contracted slots each tied to a fresh rank-1 tensor at a
// batch label, times the matching rank-0 batch factors. Returns the full
// cross product over per-tensor orders. Label-part variants of the batch
// factors drop isolated odd singletons and so share each term's exponent.
// Throws DepthError if depth < 1.
std::vector<CorrelationSpec> sgd_step_specs(const CorrelationSpec& spec, int depth);

}  // namespace widthlab::corr
