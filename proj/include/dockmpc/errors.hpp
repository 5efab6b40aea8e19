// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace dockmpc {

// Elevation / pitch left the open interval (-pi/2, pi/2).
struct GimbalLockError : std::runtime_error {
    explicit GimbalLockError(const std::string& what) : std::runtime_error(what) {}
};

// LOS range reached zero or went negative.
struct DegenerateRangeError : std::runtime_error {
    explicit DegenerateRangeError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric input contained NaN or infinity.
struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix / vector dimensions do not line up.
struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// Quadratic cost matrix failed its Cholesky factorization.
struct NotPositiveDefiniteError : std::runtime_error {
    explicit NotPositiveDefiniteError(const std::string& what) : std::runtime_error(what) {}
};

// Config file could not be parsed (syntax); carries a line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& what, int line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// Config parsed but violates an invariant (range, unknown key, missing field).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be written / opened.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// compare() was handed logs from incompatible scenarios.
struct ScenarioMismatchError : std::invalid_argument {
    explicit ScenarioMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dockmpc
