#ifndef ONSU_ERRORS_HPP
#define ONSU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace onsu {

// Malformed input document (bad JSON, missing fields, wrong types).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a domain rule
// (duplicate id, dangling endpoint, negative capacity, bad parameter range).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Instance too large for an exhaustive routine.
struct SizeGuardError : std::runtime_error {
    explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency failure (engine produced an invalid result,
// conservation broken after commit). Always a bug, never user error.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace onsu

#endif
