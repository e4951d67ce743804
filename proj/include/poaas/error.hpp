#pragma once

#include <stdexcept>
#include <string>

namespace poaas {

// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Empty or whitespace-only input where a non-empty prompt is required.
class EmptyInputError : public Error {
 public:
  EmptyInputError() : Error("empty input") {}
  explicit EmptyInputError(const std::string& what) : Error(what) {}
};

// Bad configuration: unknown keys, out-of-range thresholds, missing data files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Specialist call exceeded its deadline. The candidate is dropped; the
// pipeline continues and falls back if nothing else survives.
class AgentTimeoutError : public Error {
 public:
  explicit AgentTimeoutError(const std::string& what) : Error(what) {}
};

// Specialist endpoint answered with something we cannot parse.
class AgentProtocolError : public Error {
 public:
  explicit AgentProtocolError(const std::string& what) : Error(what) {}
};

}  // namespace poaas
