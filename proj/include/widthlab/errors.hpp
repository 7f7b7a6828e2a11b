#pragma once

#include <stdexcept>
#include <string>

namespace widthlab {

// Error hierarchy shared across modules. Each condition gets its own type so
// callers can react selectively (and tests can assert the exact failure mode).

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// expression language
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t pos) : Error(msg), position(pos) {}
    std::size_t position;  // byte offset into the source text
};
struct PairingError : Error {
    using Error::Error;
};
struct ParityError : Error {
    using Error::Error;
};
struct DepthError : Error {
    using Error::Error;
};

// diagram enumeration / exact evaluation
struct SizeError : Error {
    using Error::Error;
};
struct NotEnumerable : Error {
    using Error::Error;
};

// derivative engine
struct UnsupportedOrder : Error {
    using Error::Error;
};
struct CyclicContraction : Error {
    using Error::Error;
};
struct BudgetError : Error {
    using Error::Error;
};

// experiments
struct LowSignal : Error {
    using Error::Error;
};
struct StabilityError : Error {
    using Error::Error;
};
struct DegenerateKernel : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};

// file ingestion
struct FormatError : Error {
    FormatError(const std::string& msg, std::size_t off) : Error(msg), offset(off) {}
    std::size_t offset;
};
struct MissingClass : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace widthlab
