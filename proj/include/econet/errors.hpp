#pragma once

#include <stdexcept>
#include <string>

namespace econet {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (CSV rows, config documents). Carries a 1-based line
// number when one is known.
struct parse_error : error {
    explicit parse_error(const std::string& msg, long line_no = 0)
        : error(with_line(msg, line_no)), line(line_no) {}
    long line;

private:
    static std::string with_line(const std::string& msg, long line_no) {
        if (line_no <= 0) return msg;
        return "line " + std::to_string(line_no) + ": " + msg;
    }
};

// Structurally readable input that violates the declared schema
// (unknown industry code, bad header, wrong field for the row kind).
struct schema_error : error {
    using error::error;
};

// A record whose region cannot be mapped through the region scheme.
struct scheme_error : error {
    using error::error;
};

// Inputs that contradict the requested operation (wrong year, mismatched
// dimensions between tables).
struct input_error : error {
    using error::error;
};

// A key (year, country, industry) that the queried table does not contain.
struct lookup_error : error {
    using error::error;
};

// API precondition violations.
struct contract_error : error {
    using error::error;
};

// Filesystem failures.
struct io_error : error {
    using error::error;
};

}  // namespace econet
