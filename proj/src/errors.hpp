#pragma once

#include <stdexcept> // std::runtime_error
#include <string>

namespace perco {

// Every failure raised by the core derives from Error so the C boundary can
// map it to a status code with a single catch.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: bad window, tau <= 1, malformed config, ...
class ConfigError : public Error {
public:
  using Error::Error;
};

// A request would exceed the point or pair budget.
class ResourceError : public Error {
public:
  using Error::Error;
};

// The caller used an operation on a model it does not support.
class ContractError : public Error {
public:
  using Error::Error;
};

// The simulation window does not contain the region an event needs.
class WindowCoverageError : public Error {
public:
  using Error::Error;
};

// Self-check failed (e.g. a coupled sequence that should be monotone is not).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace perco
