#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sltr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense kernel failed (non-finite input, factorization breakdown).
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, std::size_t iterations = 0)
      : Error(what), iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Malformed or truncated file; `offset` is the byte where parsing stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sltr
