#pragma once

#include <stdexcept>
#include <string>

namespace lrmt {

/// Operational failure: bad input data, I/O, numerical divergence.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or usage. The CLI maps this to exit status 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace lrmt
