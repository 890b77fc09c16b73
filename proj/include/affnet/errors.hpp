#pragma once

#include <stdexcept>
#include <string>

namespace affnet {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  AllPruned,
  SingularAugmented,
  TooLarge,
  NumericallySingular,
  SameIndex,
  BadLevel,
  ParseError,
  NonBinaryEntry,
  EmptyInput,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported as an Error carrying its kind, so callers
/// (the CLI in particular) can map kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the file readers; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& what, std::size_t line)
      : Error(kind, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace affnet
