#pragma once

#include <stdexcept>
#include <string>

namespace fruiter {

// Base of the framework's error hierarchy. The CLI maps IoError to exit
// code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or unwritable file; message carries the path.
class IoError : public Error {
public:
  using Error::Error;
};

// Malformed JSON or a field-level schema violation.
class SchemaError : public Error {
public:
  using Error::Error;
};

// Script syntax error with source position.
class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& msg)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(col) +
              ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Event extraction failure (unresolved variable, unknown API, bad arity).
class ExtractError : public Error {
public:
  ExtractError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

// An event that should be canonicalizable is missing from a CanonicalMap.
class GroundTruthGapError : public Error {
public:
  using Error::Error;
};

// A source event is not present in its app model.
class ModelGapError : public Error {
public:
  using Error::Error;
};

// Positionally paired sequences have mismatched lengths or content.
class AlignmentError : public Error {
public:
  using Error::Error;
};

// Invalid benchmark plan (unknown app or technique, empty technique list).
class PlanError : public Error {
public:
  using Error::Error;
};

// Infeasible synthetic corpus spec.
class GenerationError : public Error {
public:
  using Error::Error;
};

// Bad input to a statistics routine (length mismatch, too few entries).
class InputError : public Error {
public:
  using Error::Error;
};

}  // namespace fruiter
