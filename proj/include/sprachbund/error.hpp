#pragma once

#include <stdexcept>
#include <string>

namespace sprachbund {

// Broad failure classes. The CLI maps each one to its exit status.
enum class ErrorKind {
  Usage,     // bad arguments or configuration
  Data,      // malformed, missing or invalid input data
  Service,   // embedding service unreachable or misbehaving
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class ServiceError : public Error {
 public:
  explicit ServiceError(const std::string& what) : Error(ErrorKind::Service, what) {}
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace sprachbund
