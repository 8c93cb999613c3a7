#pragma once

#include <stdexcept>
#include <string>

namespace uio {

/// Bad user input: shapes, missing fields, violated model preconditions.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerics gone wrong: NaN fields, CFL violation, singular factorizations.
struct NumericFault : std::runtime_error {
  explicit NumericFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace uio
