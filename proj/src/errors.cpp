#include "mecauth/errors.hpp"

namespace mecauth {

const char* error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DuplicateId: return "duplicate-id";
        case ErrorKind::EmptyId: return "empty-id";
        case ErrorKind::UnknownSid: return "unknown-sid";
        case ErrorKind::StaleTimestamp: return "stale-timestamp";
        case ErrorKind::ReplayedMessage: return "replayed-message";
        case ErrorKind::ScalarOutOfRange: return "scalar-out-of-range";
        case ErrorKind::TokenMismatch: return "token-mismatch";
        case ErrorKind::BadState: return "bad-state";
        case ErrorKind::TruncatedFrame: return "truncated-frame";
        case ErrorKind::LengthMismatch: return "length-mismatch";
        case ErrorKind::UnknownType: return "unknown-type";
        case ErrorKind::MalformedPoint: return "malformed-point";
    }
    return "unknown";
}

}  // namespace mecauth
