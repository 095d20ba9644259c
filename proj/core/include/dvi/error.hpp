#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dvi {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kInvalidLabel,
  kInfeasibleRegion,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dvi
