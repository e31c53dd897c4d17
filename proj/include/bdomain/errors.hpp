#pragma once

#include <stdexcept>
#include <string>

namespace bdomain {

// Base for all library errors. `code` is a stable machine-readable name
// ("NotClosed", "SchemaError", ...) used by the CLI for exit mapping.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};
struct NotClosedError : Error {
  explicit NotClosedError(const std::string& m) : Error("NotClosed", m) {}
};
struct NotOrientedError : Error {
  explicit NotOrientedError(const std::string& m) : Error("NotOriented", m) {}
};
struct NotConnectedError : Error {
  explicit NotConnectedError(const std::string& m) : Error("NotConnected", m) {}
};
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& m) : Error("Degenerate", m) {}
};
struct InvalidSpecError : Error {
  explicit InvalidSpecError(const std::string& m) : Error("InvalidSpec", m) {}
};
struct NotMorseError : Error {
  explicit NotMorseError(const std::string& m) : Error("NotMorseAfterTieBreak", m) {}
};
struct PerturbationFailedError : Error {
  explicit PerturbationFailedError(const std::string& m) : Error("PerturbationFailed", m) {}
};
struct CriticalHeightError : Error {
  explicit CriticalHeightError(const std::string& m) : Error("CriticalHeight", m) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error("SchemaError", m) {}
};
struct UnknownTypePairError : Error {
  explicit UnknownTypePairError(const std::string& m) : Error("UnknownTypePair", m) {}
};
struct LexError : Error {
  explicit LexError(const std::string& m) : Error("LexError", m) {}
};
struct StrandCountError : Error {
  explicit StrandCountError(const std::string& m) : Error("StrandCountError", m) {}
};
struct PatternMismatchError : Error {
  explicit PatternMismatchError(const std::string& m) : Error("PatternMismatch", m) {}
};
struct MissingMarksError : Error {
  explicit MissingMarksError(const std::string& m) : Error("MissingMarks", m) {}
};
struct InvalidWirgError : Error {
  explicit InvalidWirgError(const std::string& m) : Error("InvalidWIRG", m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace bdomain
