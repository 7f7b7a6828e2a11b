#pragma once

#include <vector>

#include "widthlab/feynman/diagram.hpp"

namespace widthlab::feynman {

// Blow-up of a Feynman diagram: vertex (tensor a, layer l) for l in 1..d,
// every vertex of degree exactly 2, so loops are connected components.
struct DoubleLineGraph {
    int m = 0;
    int d = 0;
    std::vector<std::pair<int, int>> edges;  // endpoints are a*d + (l-1)

    int vertex_count() const { return m * d; }
    int loop_count() const;  // connected components
};

DoubleLineGraph double_line(const FeynmanDiagram& g);

}  // namespace widthlab::feynman
