#pragma once

#include <stdexcept>
#include <string>

namespace steinkit {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotOrthogonal : public Error {
 public:
  using Error::Error;
};

/// Input document does not follow the published JSON schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// (q1)^2 + (q2)^2 is not a multiple of the identity within tolerance.
class NotAPencil : public Error {
 public:
  using Error::Error;
};

/// Matched +alpha / -alpha eigen-blocks carry a nonzero coupling but unequal sizes.
class MultiplicityMismatch : public Error {
 public:
  using Error::Error;
};

class NotEinstein : public Error {
 public:
  using Error::Error;
};

class NotCommuting : public Error {
 public:
  using Error::Error;
};

class NotTwoStein : public Error {
 public:
  using Error::Error;
};

class LinearlyDependent : public Error {
 public:
  using Error::Error;
};

class InapplicableCase : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input is not well-formed JSON.
class MalformedJson : public Error {
 public:
  using Error::Error;
};

}  // namespace steinkit
