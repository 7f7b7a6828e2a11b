#pragma once

#include <string>
#include <utility>
#include <vector>

#include "widthlab/corr/spec.hpp"

namespace widthlab {

// The six built-in correlation functions used by the scaling suites, from the
// plain two-point function up to the rank-3 and double-kernel contractions.
std::vector<std::pair<std::string, std::string>> builtin_row_texts();

std::vector<std::pair<std::string, corr::CorrelationSpec>> builtin_rows();

}  // namespace widthlab
