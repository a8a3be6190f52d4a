#pragma once

#include <stdexcept>
#include <string>

namespace bruhat {

struct SingularBasis : std::domain_error {
  SingularBasis() : std::domain_error("basis matrix is singular") {}
};

struct NegativeValuation : std::domain_error {
  explicit NegativeValuation(const std::string& what)
      : std::domain_error("entry of negative valuation: " + what) {}
};

// Raised when a finite-quotient count changes between level m and m+1.
struct UnstableLevel : std::runtime_error {
  UnstableLevel(int m, const std::string& what)
      : std::runtime_error("level " + std::to_string(m) + " is not stable: " + what), level(m) {}
  int level;
};

struct NotFactorizable : std::domain_error {
  explicit NotFactorizable(const std::string& what) : std::domain_error(what) {}
};

struct NotInNormalizer : std::domain_error {
  NotInNormalizer() : std::domain_error("element does not normalize the diagonal torus") {}
};

struct NonIntegral : std::runtime_error {
  explicit NonIntegral(const std::string& what)
      : std::runtime_error("inner product is not a rational integer: " + what) {}
};

struct IncompatibleAssignment : std::runtime_error {
  explicit IncompatibleAssignment(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bruhat
