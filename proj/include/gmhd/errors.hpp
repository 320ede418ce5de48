#pragma once

#include <stdexcept>
#include <string>

namespace gmhd {

/// Shape or grid mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model or configuration parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A symbol or exponent would leave double-precision range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Non-finite values met where a finite number is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown probe or subcommand selector.
class SelectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gmhd
