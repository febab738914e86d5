#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agti {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad rows, ragged streams, unparseable files.
class MalformedInput : public Error {
 public:
  MalformedInput(const std::string &what, std::size_t line)
      : Error(what), line_(line) {}
  explicit MalformedInput(const std::string &what) : Error(what) {}
  // Zero-based row index or one-based file line, depending on the producer;
  // npos when not tied to a location.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = static_cast<std::size_t>(-1);
};

class IoError : public Error {
 public:
  using Error::Error;
};

class IncompatibleSketch : public Error {
 public:
  using Error::Error;
};

class EmptySketch : public Error {
 public:
  using Error::Error;
};

class EmptyStream : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class DegenerateEnsemble : public Error {
 public:
  using Error::Error;
};

class IndependenceViolation : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

class InsufficientEnsemble : public Error {
 public:
  using Error::Error;
};

class UndefinedScore : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace agti
