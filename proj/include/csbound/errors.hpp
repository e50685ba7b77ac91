#pragma once

#include <stdexcept>
#include <string>

namespace csbound {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad lengths, out-of-range characters or indices.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The instance or run configuration is not supported (too many states,
// budget too small, flags inconsistent).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The request exceeds a resource limit (RAM budget, disk space, enumeration
// guard).
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace csbound
