#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddtruss {

/// Failure categories raised by the library. The CLI maps these onto exit
/// codes, so keep the list in sync with tools/commands.cpp.
enum class ErrorKind {
  kInvalidModel,
  kZeroLengthMember,
  kKinematicallyIndeterminate,
  kParseError,
  kEmptyDataset,
  kDegenerateDataset,
  kEmptyAllowedSet,
  kInvalidCurveSpec,
  kNotPositiveDefinite,
  kNoFreeMember,
  kTooLarge,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ddtruss
