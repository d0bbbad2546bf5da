#pragma once

#include <stdexcept>
#include <string>

namespace sparserec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSizeError : Error {
    using Error::Error;
};

struct InvalidCountError : Error {
    using Error::Error;
};

struct InvalidParameterError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace sparserec
