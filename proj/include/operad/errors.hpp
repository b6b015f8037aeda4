#pragma once

#include <stdexcept>
#include <string>

namespace operad {

// A computation stepped past the configured weight truncation.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Persistent basis cache failed validation.
struct CacheError : std::runtime_error {
    explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace operad
