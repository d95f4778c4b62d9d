#pragma once

#include <stdexcept>
#include <string>

namespace moeadstn {

// Bad arguments to an operation (dimension mismatch, out-of-range parameter).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Missing or malformed configuration and data files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace moeadstn
