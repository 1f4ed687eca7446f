#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roaddet {

enum class ErrorKind {
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedPayload,
  DimensionMismatch,
  UniformImage,
  RegionTooSmall,
  SingleClass,
  MismatchedImageLists,
  InvalidConfig,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UniformImage: return "UniformImage";
    case ErrorKind::RegionTooSmall: return "RegionTooSmall";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::MismatchedImageLists: return "MismatchedImageLists";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (and the
// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

// Same kind, message prefixed with `context: `.
inline Error with_context(const Error& e, const std::string& context) {
  return Error(e.kind(), context + ": " + e.message());
}

}  // namespace roaddet
