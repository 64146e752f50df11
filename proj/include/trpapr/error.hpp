#ifndef TRPAPR_ERROR_HPP
#define TRPAPR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace trpapr {

/// Caller passed malformed data (bad index, wrong length, duplicate entry...).
class RejectedInput : public std::invalid_argument {
 public:
  explicit RejectedInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation was applied to a value that breaks its precondition
/// (wrong domain tag, reserved tones off the unit circle).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// The quantity is mathematically undefined for this input (PAPR or
/// gradient of an all-zero signal, PSL of an all-zero signal).
class UndefinedValue : public std::domain_error {
 public:
  explicit UndefinedValue(const std::string& what) : std::domain_error(what) {}
};

}  // namespace trpapr

#endif  // TRPAPR_ERROR_HPP
