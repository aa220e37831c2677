#pragma once

#include <stdexcept>
#include <string>

namespace mecauth {

enum class ErrorKind {
    DuplicateId,
    EmptyId,
    UnknownSid,
    StaleTimestamp,
    ReplayedMessage,
    ScalarOutOfRange,
    TokenMismatch,
    BadState,
    TruncatedFrame,
    LengthMismatch,
    UnknownType,
    MalformedPoint,
};

const char* error_name(ErrorKind kind);

class ProtocolError : public std::runtime_error {
  public:
    ProtocolError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace mecauth
