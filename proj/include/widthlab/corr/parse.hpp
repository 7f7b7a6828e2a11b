#pragma once

#include <string>

#include "widthlab/corr/spec.hpp"

namespace widthlab::corr {

struct ParseOptions {
    int max_rank = 3;  // cap on derivatives per tensor accepted from source text
};

// Parses `E[ term+ ]` with term := `f(<label>)` | `d(<i>,<j>,...) f(<label>)`.
// Each lowercase index name must appear exactly twice across the whole
// expression; repeated names induce the slot pairing.
//
// Throws SyntaxError (malformed input, with byte position), PairingError
// (index used != 2 times), ParityError (odd tensor or derivative count).
CorrelationSpec parse(const std::string& text, const ParseOptions& opts = {});

// One-line caret diagnostic for a SyntaxError, e.g.
//   E[ f(x1) f(]
//              ^ expected input label
std::string caret_diagnostic(const std::string& text, const SyntaxError& err);

}  // namespace widthlab::corr
