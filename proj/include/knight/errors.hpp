#pragma once

#include <stdexcept>
#include <string>

namespace knight {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Refusal from an exact routine whose enforced instance-size cap is exceeded.
struct CapError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

}  // namespace knight
