#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace autozoom {

// Root of every exception the library throws. The CLI maps IoError to exit
// code 1 and every other Error to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Value or argument violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& reason)
      : Error(source + ":" + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The detector backend died or answered with something unreadable.
class DetectorUnavailable : public Error {
 public:
  using Error::Error;
};

// Not enough score-valid detections to seed motion prediction.
class BootstrapError : public Error {
 public:
  explicit BootstrapError(std::size_t found)
      : Error("unrecoverable bootstrap: need 3 valid key-frame detections, found " +
              std::to_string(found)),
        found_(found) {}

  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

}  // namespace autozoom
