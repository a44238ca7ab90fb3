#pragma once

#include <stdexcept>
#include <string>

namespace ctrlscore {

/// Invalid input: malformed files, out-of-range indices, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: blow-up during integration, singular operators, indefinite results.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctrlscore
