#pragma once

#include <stdexcept>
#include <string>

namespace ldev {

/// Thrown when an argument violates a documented precondition.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative or truncated computation cannot certify its result.
class nonconvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw invalid_parameter(message);
}

} // namespace detail
} // namespace ldev
