#pragma once

#include <stdexcept>
#include <string>

namespace opdefect {

/// Caller broke a documented precondition (non-Hermitian input where a
/// Hermitian one is required, dimension mismatch, invalid order m, ...).
class contract_violation : public std::invalid_argument {
public:
  explicit contract_violation(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Input is well-formed but outside the mathematical domain of the
/// operation (metric not positive definite, operator not power bounded).
class domain_error : public std::domain_error {
public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Two independent evaluations of the same quantity disagree beyond
/// tolerance.  Indicates a numerical breakdown, not a caller mistake.
class consistency_error : public std::runtime_error {
public:
  explicit consistency_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// A spectral decomposition cannot be resolved at working precision,
/// e.g. two eigenvalue clusters too close to separate but too far to merge.
class ill_conditioned_error : public std::runtime_error {
public:
  explicit ill_conditioned_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace opdefect
