#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace qplate {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfRangeError : Error {
    using Error::Error;
};

// Gain media (eps_i < 0) are not supported.
struct UnsupportedMediumError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_no)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

struct DivergentResummationError : Error {
    using Error::Error;
};

struct OpaqueStackError : Error {
    OpaqueStackError(const std::string& what, int layer_index = -1)
        : Error(layer_index >= 0 ? what + " (layer " + std::to_string(layer_index) + ")" : what),
          layer(layer_index) {}
    int layer;
};

// Raised when a mathematically impossible state is reached; signals an upstream bug.
struct InternalConsistencyError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct NumericalFailure : Error {
    using Error::Error;
};

struct UnsupportedOrderError : Error {
    using Error::Error;
};

struct UnsupportedStateError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    ValidationError(const std::string& what, std::string field_name, int line_no = 0, int column_no = 0)
        : Error(format(what, field_name, line_no, column_no)),
          field(std::move(field_name)), line(line_no), column(column_no) {}
    std::string field;
    int line;
    int column;

private:
    static std::string format(const std::string& what, const std::string& field, int line, int column) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + what;
    }
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace qplate
