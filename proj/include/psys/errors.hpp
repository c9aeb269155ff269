#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psys {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text. Line and column are 1-based and point inside the
/// offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed text that does not describe a valid object (undeclared
/// symbols, undriven wires and the like).
class SemanticError : public Error {
public:
    using Error::Error;
};

/// Combinational loop in a netlist.
class CycleError : public Error {
public:
    using Error::Error;
};

/// Netlist shape not supported by the requested backend.
class ShapeError : public Error {
public:
    using Error::Error;
};

class ParamError : public Error {
public:
    using Error::Error;
};

/// A rule names a child or link that does not exist in its region.
class TargetUnresolvable : public Error {
public:
    using Error::Error;
};

}  // namespace psys
