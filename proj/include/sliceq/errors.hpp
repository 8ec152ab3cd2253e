#pragma once

#include <stdexcept>
#include <string>

namespace sliceq {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar or circuit text that does not conform to the file format.
/// Positions are 1-based.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

/// The input grammar cannot be brought to Chomsky normal form without
/// changing derivation counts.
struct NormalizeError : Error {
    using Error::Error;
};

/// An exhaustive-enumeration request exceeds the configured budget.
struct BudgetError : Error {
    using Error::Error;
};

}  // namespace sliceq
