#ifndef IFSTBC_ERRORS_HPP
#define IFSTBC_ERRORS_HPP

#include <stdexcept>

namespace ifstbc {

// Base type for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class SvdNonConvergence : public Error {
 public:
  using Error::Error;
};

// Enumeration walked past its node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotInvertibleModM : public Error {
 public:
  using Error::Error;
};

class SelectionFailure : public Error {
 public:
  using Error::Error;
};

class MlBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NvsViolated : public Error {
 public:
  using Error::Error;
};

class InsufficientErrors : public Error {
 public:
  using Error::Error;
};

class DegenerateDesign : public Error {
 public:
  using Error::Error;
};

class SymbolOutOfRange : public Error {
 public:
  using Error::Error;
};

// Channel sampler kept drawing rank-deficient realizations.
class RankFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ifstbc

#endif
