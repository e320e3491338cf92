#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rechart {

/// Malformed expression text. `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// Malformed chart or derivation document.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& message) : std::runtime_error(message) {}
};

/// A configurable safety budget was exceeded.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace rechart
