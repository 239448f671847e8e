#pragma once

#include <stdexcept>
#include <string>

namespace covkit {

/// Base of all library errors. Precondition and input failures throw;
/// verification failures are report entries instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class NotACovering : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A model could not certify or construct what was asked of it
/// (delta, partition, witness, exact measure).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Sampled construction did not see enough of the space.
class UndersamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace covkit
