#pragma once

#include <stdexcept>
#include <string>

namespace copent {

// Raised for invalid input data or violated preconditions of an estimator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace copent
