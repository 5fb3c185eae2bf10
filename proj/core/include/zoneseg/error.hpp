#pragma once

#include <stdexcept>
#include <string>

namespace zoneseg {

// Base of every error the library throws. Callers that only need a message
// can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (bad zone, length mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownZoneError : public ValidationError {
 public:
  UnknownZoneError(std::string zone, std::size_t line_index)
      : ValidationError("unknown zone '" + zone + "' at line " +
                        std::to_string(line_index)),
        zone_(std::move(zone)),
        line_index_(line_index) {}

  const std::string& zone() const { return zone_; }
  std::size_t line_index() const { return line_index_; }

 private:
  std::string zone_;
  std::size_t line_index_;
};

class DimensionMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed text input; line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Binary embedding / model file problems.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class VersionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IndexMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class MissingIdError : public Error {
 public:
  using Error::Error;
};

// Embedding service failures.
class ServiceError : public Error {
 public:
  using Error::Error;
};

class TransportError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class HttpStatusError : public ServiceError {
 public:
  HttpStatusError(int status, const std::string& body)
      : ServiceError("embedding service returned HTTP " +
                     std::to_string(status) + ": " + body),
        status_(status) {}

  int status() const { return status_; }

 private:
  int status_;
};

class MalformedResponseError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

}  // namespace zoneseg
