#pragma once

#include <stdexcept>
#include <string>

namespace pingcert {

// Malformed or inconsistent input (bad fraction, singular matrix, dimension mismatch).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A decision could not be reached before the precision cap: the third value of
// certified / not certified / undecided.
class Undecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A budget-bounded search found nothing. Never a claim of non-existence.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration hit its node cap; `complete` is the last fully explored level.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, int complete)
      : std::runtime_error(what), complete_(complete) {}
  int complete() const noexcept { return complete_; }

 private:
  int complete_;
};

}  // namespace pingcert
