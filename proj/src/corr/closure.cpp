#include "widthlab/corr/closure.hpp"

namespace widthlab::corr {

namespace {

// appends a contracted slot to tensor `t`, tied to a fresh rank-1 tensor at
// `label`; returns the spec extended in place
void attach_gradient_factor(CorrelationSpec& spec, int t, const std::string& label) {
    const int new_slot = spec.tensors[t].rank;
    spec.tensors[t].rank += 1;
    const int g = spec.tensor_count();
    spec.tensors.push_back({label, 1});
    spec.pairs.push_back({{t, new_slot}, {g, 0}});
}

}  // namespace

std::vector<DerivativeTerm> time_derivative_specs(const CorrelationSpec& spec, int trainset_size) {
    spec.validate();
    std::vector<DerivativeTerm> terms;
    for (int t = 0; t < spec.tensor_count(); ++t) {
        for (int j = 0; j < trainset_size; ++j) {
            const std::string label = "tr" + std::to_string(j);
            CorrelationSpec base = spec;
            attach_gradient_factor(base, t, label);
            // network-value part: times f(x') at the same train point
            CorrelationSpec with_f = base;
            with_f.tensors.push_back({label, 0});
            terms.push_back({CoefficientRole::network_value, j, std::move(with_f)});
            // label part: the rank-0 factor is replaced by the constant y'
            terms.push_back({CoefficientRole::label, j, std::move(base)});
        }
    }
    return terms;
}

std::vector<CorrelationSpec> sgd_step_specs(const CorrelationSpec& spec, int depth) {
    if (depth < 1) throw DepthError("depth must be >= 1, got " + std::to_string(depth));
    spec.validate();
    const int m = spec.tensor_count();
    const int max_order = depth + 1;

    std::vector<CorrelationSpec> out;
    // odometer over per-tensor expansion orders (k_0, ..., k_{m-1})
    std::vector<int> order(m, 0);
    int fresh = 0;
    for (;;) {
        CorrelationSpec term = spec;
        fresh = 0;
        for (int t = 0; t < m; ++t) {
            for (int k = 0; k < order[t]; ++k) {
                const std::string label = "b" + std::to_string(fresh++);
                attach_gradient_factor(term, t, label);
                term.tensors.push_back({label, 0});
            }
        }
        out.push_back(std::move(term));

        int pos = 0;
        while (pos < m && order[pos] == max_order) order[pos++] = 0;
        if (pos == m) break;
        order[pos] += 1;
    }
    return out;
}

}  // namespace widthlab::corr
