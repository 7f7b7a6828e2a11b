#pragma once

#include <map>
#include <string>
#include <vector>

#include "widthlab/corr/spec.hpp"
#include "widthlab/net/engine.hpp"

namespace widthlab::net {

// Contraction plan for a correlation-function integrand: gradients feed
// higher-rank tensors, chains of partially contracted tensors resolve through
// once-open vector steps, and the sample value is the product of the
// resulting scalars.
struct EvalPlan {
    enum class Kind { value, grad, once_open, contract, dot };
    struct Step {
        Kind kind;
        int tensor = -1;        // owning tensor for value/grad/once_open/contract
        std::vector<int> deps;  // vector slot ids consumed, in slot order
        int out = -1;           // vector slot id produced (grad/once_open)
    };
    std::vector<Step> steps;
    int vector_slots = 0;
};

// Throws CyclicContraction when the pairing cannot be resolved into
// gradient/directional steps (e.g. two rank-2 tensors contracted with each
// other twice, or a self-contraction).
EvalPlan compile(const corr::CorrelationSpec& spec);

using InputMap = std::map<std::string, Eigen::VectorXd>;

double evaluate_with_plan(const EvalPlan& plan, const corr::CorrelationSpec& spec,
                          const ParamSet& params, const InputMap& inputs);

struct MaterializeLimits {
    int max_params = 5000;
    std::int64_t max_elements = 40'000'000;  // total doubles across materialized tensors
};

// Brute-force oracle: builds the full derivative tensors and contracts the
// pairing literally, using only pairwise tensordots/traces. Independent of
// the plan path. Throws BudgetError beyond the limits.
double materialize_value(const corr::CorrelationSpec& spec, const ParamSet& params,
                         const InputMap& inputs, const MaterializeLimits& limits = {});

// plan path with materialization fallback on CyclicContraction
double evaluate(const corr::CorrelationSpec& spec, const ParamSet& params, const InputMap& inputs,
                const MaterializeLimits& limits = {});

}  // namespace widthlab::net
