#pragma once

#include <stdexcept>
#include <string>

namespace hypercross {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hyperplanes not in general position (normal matrix numerically singular).
class NearSingular : public Error {
 public:
  using Error::Error;
};

// Point set is not affinely full-dimensional, or hull construction failed.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class OriginNotInterior : public Error {
 public:
  using Error::Error;
};

// C(N, d) exceeds the caller's tuple budget.
class TupleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Zero cell still not enclosed after the allowed number of radius doublings.
class Unbounded : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class DegenerateCategories : public Error {
 public:
  using Error::Error;
};

class BinMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

}  // namespace hypercross
