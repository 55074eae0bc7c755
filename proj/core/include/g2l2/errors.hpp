#pragma once

#include <stdexcept>
#include <string>

namespace g2l2 {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatch between operands of a tape op.
struct ShapeError : Error {
    using Error::Error;
};

// Numeric-domain violation (log of non-positive, division by zero, ...).
struct DomainError : Error {
    using Error::Error;
};

// A value exceeded a representation bound (e.g. ProbString length cap).
// During training the parser catches this and drops the derivation.
struct OverflowError : Error {
    using Error::Error;
};

struct ParseFailure : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

}  // namespace g2l2
