#pragma once

#include <stdexcept>
#include <string>

namespace stresseval {

// Base of every error the library throws. `kind()` is a stable,
// machine-readable tag ("MissingField", "RetriesExhausted", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Input records that do not satisfy a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string& message)
      : Error("ProviderError", "status " + std::to_string(status) + ": " + message),
        status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// Retryable provider failure (network error, 429, 5xx).
class TransientProviderError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RetriesExhausted : public Error {
 public:
  RetriesExhausted(int attempts, const std::string& last)
      : Error("RetriesExhausted", "gave up after " + std::to_string(attempts) +
                                      " attempts; last error: " + last) {}
};

class MockMiss : public Error {
 public:
  explicit MockMiss(const std::string& digest)
      : Error("MockMiss", "no scripted response for request " + digest), digest_(digest) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

}  // namespace stresseval
