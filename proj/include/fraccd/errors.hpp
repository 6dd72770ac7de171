#pragma once

#include <stdexcept>
#include <string>

namespace fraccd {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : SolverError {
    using SolverError::SolverError;
};

struct InfeasibleState : SolverError {
    using SolverError::SolverError;
};

struct NonPositiveDenominator : SolverError {
    using SolverError::SolverError;
};

struct ParseError : SolverError {
    ParseError(std::size_t line, const std::string& reason)
        : SolverError("parse error at line " + std::to_string(line) + ": " + reason), line(line) {}
    std::size_t line;
};

struct IndexOutOfOrder : ParseError {
    using ParseError::ParseError;
};

struct ZeroMatrix : SolverError {
    using SolverError::SolverError;
};

struct BadDimensions : SolverError {
    using SolverError::SolverError;
};

struct BadK : SolverError {
    using SolverError::SolverError;
};

struct EmptyCandidates : SolverError {
    using SolverError::SolverError;
};

struct DegenerateAllZero : SolverError {
    using SolverError::SolverError;
};

struct UnboundedBelow : SolverError {
    using SolverError::SolverError;
};

struct ZeroVector : SolverError {
    using SolverError::SolverError;
};

struct ZeroGradient : SolverError {
    using SolverError::SolverError;
};

struct UnsupportedVariant : SolverError {
    using SolverError::SolverError;
};

struct ProxUnavailable : SolverError {
    using SolverError::SolverError;
};

struct RankDeficient : SolverError {
    using SolverError::SolverError;
};

struct DimensionTooLarge : SolverError {
    using SolverError::SolverError;
};

struct ConfigError : SolverError {
    using SolverError::SolverError;
};

// Raised by the driver in verify mode when a per-iteration descent check fails.
struct AssertionFailure : SolverError {
    AssertionFailure(long long iteration, const std::string& details)
        : SolverError("assertion failed at iteration " + std::to_string(iteration) + ": " + details),
          iteration(iteration) {}
    long long iteration;
};

}  // namespace fraccd
