#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sdcl {

/// Root of all library errors. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid settings or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (dimension mismatch, label out of range, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during optimization or scoring.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Text input that failed to parse; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Corrupt binary file; carries the byte offset where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedVersionError : public FormatError {
 public:
  UnsupportedVersionError(std::uint32_t version, std::size_t offset)
      : FormatError("unsupported checkpoint version " + std::to_string(version), offset),
        version_(version) {}

  std::uint32_t version() const noexcept { return version_; }

 private:
  std::uint32_t version_;
};

}  // namespace sdcl
