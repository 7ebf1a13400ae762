#pragma once

#include <stdexcept>
#include <string>

namespace capflow {

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedFieldError : public std::invalid_argument {
 public:
  explicit UnsupportedFieldError(const std::string& what) : std::invalid_argument(what) {}
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace capflow
