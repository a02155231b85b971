#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace refinery {

// Every error the library raises derives from this; the CLI maps all of them
// to exit code 2.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a precondition (bad state id, mismatched tables, unknown
// event, conflicting options).
class usage_error : public error {
public:
    using error::error;
};

struct source_position {
    std::size_t line = 1;
    std::size_t column = 1;
};

class parse_error : public error {
public:
    parse_error(source_position where, std::string message)
        : error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
          _where(where) {}

    source_position where() const { return _where; }

private:
    source_position _where;
};

class type_error : public error {
public:
    type_error(source_position where, std::string message)
        : error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
          _where(where) {}

    source_position where() const { return _where; }

private:
    source_position _where;
};

// Partial builtin applied outside its domain (min/head/tail of an empty
// collection) or a non-boolean where a predicate was required.
class eval_error : public error {
public:
    using error::error;
};

class ground_error : public error {
public:
    using error::error;
};

} // namespace refinery
