#pragma once

#include <stdexcept>
#include <string>

namespace dissrel {

// Argument outside the physical domain, e.g. |v| >= c.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Adaptive controller could not meet the tolerance above the minimum step.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid too coarse, non-uniform where uniform is required, or not increasing.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A characteristic of the transport equation stalls inside the grid.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid point not reached by any characteristic from the seed line.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dissrel
