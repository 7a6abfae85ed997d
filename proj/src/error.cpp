#include "fuzzymark/error.hpp"

namespace fuzzymark {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return "io";
        case ErrorKind::MalformedHeader: return "malformed-header";
        case ErrorKind::UnsupportedMaxval: return "unsupported-maxval";
        case ErrorKind::Truncated: return "truncated";
        case ErrorKind::Malformed: return "malformed";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::CorruptKey: return "corrupt-key";
        case ErrorKind::VersionMismatch: return "version-mismatch";
    }
    return "unknown";
}

}  // namespace fuzzymark
