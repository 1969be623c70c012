#pragma once
#include <stdexcept>
#include <string>

namespace escape {

// Precondition or parameter-window violation (maps to CLI exit 2).
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A required regime hypothesis does not hold, e.g. "d1>d4" (CLI exit 2).
struct regime_error : std::runtime_error {
    explicit regime_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical classification could not be decided (CLI exit 3).
struct inconclusive_error : std::runtime_error {
    explicit inconclusive_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace escape
