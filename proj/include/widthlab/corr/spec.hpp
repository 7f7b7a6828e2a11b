#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "widthlab/errors.hpp"

namespace widthlab::corr {

// One factor of a correlation-function integrand: the rank-k parameter
// derivative of the network function at a labelled input. Rank 0 is the bare
// network value.
struct DerivativeTensor {
    std::string input;
    int rank = 0;
};

// (tensor index, derivative slot) — slots are 0-based within a tensor.
struct SlotRef {
    int tensor = 0;
    int slot = 0;
    friend bool operator==(const SlotRef&, const SlotRef&) = default;
    friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

using SlotPair = std::pair<SlotRef, SlotRef>;

// A correlation function: an ordered product of derivative tensors whose
// derivative slots are identified in pairs and summed over all parameters.
struct CorrelationSpec {
    std::vector<DerivativeTensor> tensors;
    std::vector<SlotPair> pairs;

    int tensor_count() const { return static_cast<int>(tensors.size()); }

    int total_rank() const {
        int k = 0;
        for (const auto& t : tensors) k += t.rank;
        return k;
    }

    // distinct input labels in order of first appearance
    std::vector<std::string> inputs() const;

    // Checks slot totality (every slot in exactly one pair) and in-range
    // references. Parity of m and k_m is a parse-level constraint: specs
    // produced by symbolic expansions may legitimately carry odd counts.
    void validate() const;

    bool has_self_pair() const {
        for (const auto& p : pairs)
            if (p.first.tensor == p.second.tensor) return true;
        return false;
    }

    // contraction multiplicity between tensors i < j (self pairs excluded)
    std::vector<std::vector<int>> pair_multiplicity() const;
};

// Round-trip surface form: indices are renamed i0, i1, ...
std::string print(const CorrelationSpec& spec);

// Canonical JSON document (tensors array + pairs array), the interchange
// format consumed by the other modules and the CLI.
std::string to_json(const CorrelationSpec& spec);
CorrelationSpec from_json(const std::string& text);

}  // namespace widthlab::corr
