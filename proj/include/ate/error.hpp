#pragma once

#include <stdexcept>
#include <string>

namespace ate {

// Fatal engine error. Messages are module-qualified ("ingest: ...") so the
// CLI can surface where a failure originated.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ate
