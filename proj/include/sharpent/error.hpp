#pragma once

#include <stdexcept>
#include <string>

namespace sharpent {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An iterative or adaptive procedure ran out of budget.
class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluation routes of the same quantity disagree.
class OracleDisagreement : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GridTooCoarse : public DomainError {
public:
  using DomainError::DomainError;
};

/// Profile vanishes (or has interior zeros) where the operation needs it positive.
class DegenerateProfile : public DomainError {
public:
  using DomainError::DomainError;
};

class NormalizationError : public DomainError {
public:
  using DomainError::DomainError;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace detail
}  // namespace sharpent
