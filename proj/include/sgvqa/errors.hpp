#pragma once

#include <stdexcept>
#include <string>

namespace sgvqa {

enum class ErrorKind {
  InvalidParameter,   // bad argument to a library operation
  Config,             // malformed configuration / CLI usage
  Io,                 // file read/write failure
  ParseError,         // malformed program or data record
  TypeError,          // program fails static checking
  NonUnique,          // unique applied to a non-singleton set
  MissingTexture,     // texture query on a scene without textures
  EmptySelection,     // selection op on an empty detection list
  InvalidLiteral,     // filter value outside the vocabulary
  LengthMismatch,     // probability vectors of different lengths
  DegenerateLayout,   // duplicate coordinate on an axis
  PlacementExhausted, // rejection sampling ran out of retries
  TemplateExhausted,  // question generation ran out of retries
  IncompleteGrid,     // accuracy grid missing a required cell
  Alignment,          // prediction/gold files do not line up
};

const char* error_kind_name(ErrorKind kind);

/// Single exception type used across the toolkit; `kind` identifies the
/// failure class so callers (and the CLI exit-code mapping) can dispatch
/// without string matching. Runtime failures raised while executing a
/// program carry the offending op index.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int op_index = -1)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        op_index_(op_index) {}

  ErrorKind kind() const { return kind_; }
  int op_index() const { return op_index_; }

 private:
  ErrorKind kind_;
  int op_index_;
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::TypeError: return "type error";
    case ErrorKind::NonUnique: return "non-unique";
    case ErrorKind::MissingTexture: return "missing texture";
    case ErrorKind::EmptySelection: return "empty selection";
    case ErrorKind::InvalidLiteral: return "invalid literal";
    case ErrorKind::LengthMismatch: return "length mismatch";
    case ErrorKind::DegenerateLayout: return "degenerate layout";
    case ErrorKind::PlacementExhausted: return "placement exhausted";
    case ErrorKind::TemplateExhausted: return "template exhausted";
    case ErrorKind::IncompleteGrid: return "incomplete grid";
    case ErrorKind::Alignment: return "alignment error";
  }
  return "error";
}

}  // namespace sgvqa
