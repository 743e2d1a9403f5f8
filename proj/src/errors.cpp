#include "twist/errors.hpp"

namespace tw {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPair: return "invalid-pair";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Schema: return "schema";
  }
  return "error";
}

}  // namespace tw
