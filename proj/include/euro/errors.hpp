#pragma once

#include <stdexcept>
#include <string>

namespace euro {

// Malformed input files, schema violations, missing teams, etc.  CLI exit 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-convergence, singular systems, exploding intensities.  CLI exit 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace euro
