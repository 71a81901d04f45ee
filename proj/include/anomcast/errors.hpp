#pragma once

#include <stdexcept>
#include <string>

namespace anomcast {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content; message carries file and line number.
struct ParseError : Error {
    using Error::Error;
};

// Input violates a documented domain rule (range, ordering, schema).
struct ValidationError : Error {
    using Error::Error;
};

// Input is structurally valid but carries no usable signal
// (zero variance, constant series).
struct DegenerateInputError : Error {
    using Error::Error;
};

// Not enough observations for the requested operation.
struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace anomcast
