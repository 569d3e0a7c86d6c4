#pragma once

#include <stdexcept>
#include <string>

namespace nterm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A block received more coordinates than it has.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The number of tie resolutions exceeds the configured budget. Worst-case
// semantics forbid sampling, so the computation is refused.
class TieBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The materialized blocks of a schedule cannot certify the requested value
// for the infinite block sum.
class InadequateTruncation : public Error {
 public:
  using Error::Error;
};

class OracleUnavailable : public Error {
 public:
  using Error::Error;
};

class ScheduleTooShallow : public Error {
 public:
  using Error::Error;
};

class TermBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace nterm
