#pragma once

#include <stdexcept>
#include <string>

namespace cms {

// Error taxonomy shared by the library and the CLI exit codes:
//   ConfigError       -> exit 1   (unreadable/invalid configuration)
//   ConvergenceError  -> exit 2   (iteration or root search did not converge)
//   ResourceError     -> exit 3   (enumeration/matrix size above a configured cap)
//   PreconditionError -> exit 4   (caller violated an operation's contract)

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cms
