#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition on arguments (dimension mismatch, bad index, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// Matrix is numerically singular or otherwise unusable as input.
struct DegenerateInputError : Error {
    using Error::Error;
};

// Two consecutive singular values coincide within tolerance, so the
// requested singular subspace is not well defined.
struct DegenerateGapError : Error {
    DegenerateGapError(const std::string& what, double relative_gap, long time = -1)
        : Error(what), relative_gap(relative_gap), time(time) {}
    double relative_gap;
    long time;  // flow time at which the gap degenerated, -1 if not applicable
};

// Non-finite entries or solver failure.
struct NumericError : Error {
    NumericError(const std::string& what, std::size_t prefix_length = 0)
        : Error(what), prefix_length(prefix_length) {}
    std::size_t prefix_length;
};

// Enumeration larger than the configured cap (or 2^63).
struct SizeError : Error {
    using Error::Error;
};

struct WindowBoundsError : Error {
    using Error::Error;
};

}  // namespace repdyn
