#pragma once

#include <string>
#include <vector>

#include "widthlab/feynman/diagram.hpp"
#include "widthlab/rational.hpp"

namespace widthlab::feynman {

struct DiagramStats {
    int loops = 0;            // faces: loop count of the double-line graph
    int component_count = 0;  // connected components of the Feynman graph
    Rational s_gamma;         // loops - d*m/2
    std::vector<int> euler;   // per-component Euler characteristic v - e + f
};

struct DiagramReport {
    std::uint64_t diagram_count = 0;
    std::vector<DiagramStats> diagrams;
    Rational tight_exponent;    // max over s_gamma
    Rational cluster_exponent;  // s_C of the same spec, for cross-checking
    bool bound_consistent = false;  // tight <= s_C
};

// Enumerates the diagrams of the spec and applies the loop counting rule
// s_gamma = l_gamma - d*m/2 per diagram; the report's tight exponent is the
// max. Also verifies tight <= s_C from the cluster graph.
DiagramReport exponent(const corr::CorrelationSpec& spec, int depth,
                       const EnumerationLimits& limits = {});

std::string to_json(const DiagramReport& report);

}  // namespace widthlab::feynman
