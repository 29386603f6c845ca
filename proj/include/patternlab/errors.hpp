#pragma once

#include <stdexcept>
#include <string>

namespace patternlab {

// Exit-code contract for the CLI: parse -> 2, domain -> 3, size/precision -> 4.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct size_limit_error : std::runtime_error {
    explicit size_limit_error(const std::string& what) : std::runtime_error(what) {}
};

struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace patternlab
