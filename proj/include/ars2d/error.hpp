#pragma once

#include <stdexcept>
#include <string>

namespace ars2d {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed files, unknown fixtures, inconsistent graphs.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace ars2d
