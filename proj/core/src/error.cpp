#include "ddtruss/error.hpp"

namespace ddtruss {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidModel:
      return "InvalidModel";
    case ErrorKind::kZeroLengthMember:
      return "ZeroLengthMember";
    case ErrorKind::kKinematicallyIndeterminate:
      return "KinematicallyIndeterminate";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kEmptyDataset:
      return "EmptyDataset";
    case ErrorKind::kDegenerateDataset:
      return "DegenerateDataset";
    case ErrorKind::kEmptyAllowedSet:
      return "EmptyAllowedSet";
    case ErrorKind::kInvalidCurveSpec:
      return "InvalidCurveSpec";
    case ErrorKind::kNotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorKind::kNoFreeMember:
      return "NoFreeMember";
    case ErrorKind::kTooLarge:
      return "TooLarge";
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ddtruss
