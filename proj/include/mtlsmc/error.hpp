#ifndef MTLSMC_ERROR_HPP
#define MTLSMC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtlsmc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInterval : public Error {
 public:
  using Error::Error;
};

/// A temporal window with an infinite upper bound reached an evaluator.
class UnboundedWindow : public Error {
 public:
  using Error::Error;
};

/// The formula's temporal reach extends past the end of the trace.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownAtom : public Error {
 public:
  explicit UnknownAtom(const std::string& name)
      : Error("unknown atom '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NotPropositional : public Error {
 public:
  using Error::Error;
};

class OffGrid : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Malformed trace/config file; line is 1-based, 0 when not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& msg, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset, std::vector<std::string> expected)
      : Error(describe(msg, offset, expected)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(const std::string& msg, std::size_t offset,
                              const std::vector<std::string>& expected) {
    std::string s = "parse error at offset " + std::to_string(offset) + ": " + msg;
    if (!expected.empty()) {
      s += " (expected one of:";
      for (const auto& e : expected) s += " " + e;
      s += ")";
    }
    return s;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace mtlsmc

#endif  // MTLSMC_ERROR_HPP
