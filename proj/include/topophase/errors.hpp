#pragma once

#include <stdexcept>
#include <string>

namespace topophase {

// Configuration document or user-supplied value failed schema/invariant
// checks. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation received a value outside its stated domain. CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No facility subset satisfies the model constraints. CLI exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topophase
