#pragma once

#include <stdexcept>
#include <string>

namespace unfollow {

// Bad argument values or malformed domain data.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Files that cannot be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Column layouts or serialized containers that do not match what the reader expects.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unknown keys or unparsable values in a pipeline configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace unfollow
