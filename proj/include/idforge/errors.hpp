#pragma once

#include <stdexcept>
#include <string>

namespace idforge {

// Malformed textual input: coloring files, term strings, witness JSON, DIMACS.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds the sizes this implementation is prepared to handle
// (complete term sets above arity 4, search/encode outside the small box, ...).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace idforge
