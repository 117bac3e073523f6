#pragma once

#include <stdexcept>
#include <string>

namespace shapect {

// Thrown on contract violations: bad arguments, malformed files, dimension
// mismatches. The message names the operation and the offending value.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shapect
