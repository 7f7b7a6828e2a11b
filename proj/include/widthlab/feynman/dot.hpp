#pragma once

#include <string>

#include "widthlab/feynman/diagram.hpp"
#include "widthlab/feynman/double_line.hpp"

namespace widthlab::feynman {

// Graphviz form; edges carry a `type` attribute (U, W1..., V) and forced
// edges are styled dashed.
std::string to_dot(const FeynmanDiagram& g, const std::string& name = "feynman");
std::string to_dot(const DoubleLineGraph& g, const std::string& name = "double_line");

}  // namespace widthlab::feynman
