#pragma once

#include <stdexcept>
#include <string>

namespace nlqw {

// Invalid arguments or malformed input. The CLI maps this to exit code 2.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Window overflow, root-finder failure, degenerate fits. Exit code 3.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nlqw
