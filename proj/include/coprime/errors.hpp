#pragma once

#include <stdexcept>

namespace coprime {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a configured cost guard (enumeration caps, modulus size).
class ResourceCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace coprime
