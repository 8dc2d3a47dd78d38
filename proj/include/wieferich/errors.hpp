#pragma once

#include <stdexcept>

namespace wieferich {

class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotDivisible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A mathematical guarantee failed; always an implementation bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IneligibleBase : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wieferich
