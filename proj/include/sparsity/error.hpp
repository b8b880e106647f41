#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsity {

enum class ErrorKind {
  WorkloadExceeded,
  NotCoprime,
  EvenModulus,
  EmptySet,
  ZeroInput,
  OddD,
  HypothesisViolated,
  NotCoprimeOrders,
  DegenerateInstance,
  PrecisionInsufficient,
  DomainError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sparsity
