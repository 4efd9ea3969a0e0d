#ifndef TLINK_ERROR_H_
#define TLINK_ERROR_H_

#include <stdexcept>
#include <string>

namespace tlink {

// Base class for every error raised by the library. The command-line front
// end maps IncompatibleError to exit code 3 and everything else to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, or 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A dependency structure that is not a single rooted tree.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A value outside a closed set, e.g. an unknown relation label.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A dangling reference: unknown sentence id or token index.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

class InvalidPairError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix dimensions that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A checkpoint that cannot be applied to the given data or resources.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace tlink

#endif  // TLINK_ERROR_H_
