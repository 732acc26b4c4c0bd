#pragma once

#include <stdexcept>
#include <string>

namespace stlcbf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a formula string; carries 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Formula is syntactically valid but outside the supported fragment
/// (negated temporal operator, nested temporal operator, mixed conjunction).
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// Scenario file failed validation; message lists every violated constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Barrier parameters outside their admissible ranges.
class BarrierError : public Error {
 public:
  using Error::Error;
};

/// Signal does not cover the window a semantics query needs.
class SignalError : public Error {
 public:
  using Error::Error;
};

/// Effective replanner weight fell to the floor; deadline cannot be relaxed further.
class ReplanExhausted : public Error {
 public:
  using Error::Error;
};

/// Recomputed deadline lies past the task window end while the goal is unmet.
class InfeasibleRetime : public Error {
 public:
  using Error::Error;
};

}  // namespace stlcbf
