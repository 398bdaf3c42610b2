#pragma once

#include <stdexcept>
#include <string>

namespace pj {

// Computation failed on well-formed input.  The CLI maps this to exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the region where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input data.  The CLI maps this to exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pj
