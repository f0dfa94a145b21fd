#pragma once

#include <stdexcept>
#include <string>

namespace cbdt {

/// Domain error: invariant violation, malformed document, unsatisfiable request.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cbdt
