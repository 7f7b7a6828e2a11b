#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "widthlab/corr/spec.hpp"

namespace widthlab::feynman {

// Edge types are layer indices 0..d: 0 is the input matrix, 1..d-1 the hidden
// square matrices, d the output vector.
struct Matching {
    std::vector<int> partner;  // partner[v] over vertices 0..m-1
};

// A contraction realized by the diagram: the tensor pair it joins and the
// edge type that carries it (the forced edge).
struct ForcedEdge {
    int a = 0;
    int b = 0;
    int type = 0;
};

struct FeynmanDiagram {
    int m = 0;  // vertices (tensors)
    int d = 0;  // hidden layers
    std::vector<Matching> matchings;  // d+1 perfect matchings, indexed by type
    std::vector<ForcedEdge> forced;   // one entry per contraction of the spec

    // connected components of the union of all matchings
    std::vector<std::vector<int>> components() const;
};

struct EnumerationLimits {
    int max_tensors = 8;
    int max_depth = 4;
    std::uint64_t tuple_budget = 20'000'000;  // bound on (m-1)!!^(d+1)
};

std::uint64_t double_factorial(int n);

// Streams every diagram of the correlation function for a depth-d network:
// all (d+1)-tuples of perfect matchings such that each contracted tensor pair
// is covered by enough connecting edges, crossed with every injective
// assignment of that pair's contractions to those edges. Returning false from
// the callback stops the enumeration.
//
// Throws NotEnumerable (self-contraction, odd m, or a tensor rank above
// depth+1) and SizeError (budget exceeded).
void enumerate(const corr::CorrelationSpec& spec, int depth,
               const std::function<bool(const FeynmanDiagram&)>& yield,
               const EnumerationLimits& limits = {});

// convenience collector
std::vector<FeynmanDiagram> enumerate_all(const corr::CorrelationSpec& spec, int depth,
                                          const EnumerationLimits& limits = {});

}  // namespace widthlab::feynman
