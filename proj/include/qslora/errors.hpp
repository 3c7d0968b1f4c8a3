#pragma once

#include <stdexcept>
#include <string>

namespace qslora {

// Raised when an argument violates a documented precondition.
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical routine cannot reach its tolerance.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) {
    throw invalid_input(what);
  }
}

}  // namespace detail

}  // namespace qslora
