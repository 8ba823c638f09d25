#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fnls {

enum class ErrorKind {
  InvalidGrid,
  InvalidOrder,
  InvalidExponent,
  InvalidParams,
  InvalidInput,
  NonFiniteField,
  GridMismatch,
  ZeroField,
  ScalePrecisionLoss,
  NotConverged,
  DegenerateInit,
  NotCritical,
  Diverged,
  CutoffTooLarge,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fnls
