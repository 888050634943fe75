#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `position()` is a 0-based offset into the token
/// stream or line, whichever the producer documents.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace dcc
