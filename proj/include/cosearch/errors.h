#ifndef COSEARCH_ERRORS_H_
#define COSEARCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cosearch {

// Base class for every error raised by the library. kind() is a short
// machine-readable tag that the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string &kind() const { return kind_; }

 private:
  std::string kind_;
};

// Input document could not be parsed.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string &message) : Error("format", message) {}
};

// Input parsed but violates a data invariant (duplicate ids, empty sets...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &message)
      : Error("validation", message) {}
};

// Caller passed an out-of-range parameter.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string &message)
      : Error("parameter", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message) : Error("io", message) {}
};

}  // namespace cosearch

#endif  // COSEARCH_ERRORS_H_
