#include "maintviz/error.hpp"

namespace maintviz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotARepository: return "NotARepository";
    case ErrorKind::EmptyRepository: return "EmptyRepository";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::InvalidLabel: return "InvalidLabel";
    case ErrorKind::UnknownProject: return "UnknownProject";
    case ErrorKind::InvalidThreshold: return "InvalidThreshold";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace maintviz
