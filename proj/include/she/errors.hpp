#pragma once

#include <stdexcept>
#include <string>

namespace she {

// Field contains NaN/Inf where finite values are required.
struct invalid_field : std::runtime_error {
    explicit invalid_field(const std::string& what) : std::runtime_error(what) {}
};

// A value that must be strictly positive is not; carries the offending index.
struct positivity_error : std::runtime_error {
    int index;
    positivity_error(const std::string& what, int idx)
        : std::runtime_error(what + " at index " + std::to_string(idx)), index(idx) {}
};

// Zero-mass field where a ratio or normalization is requested.
struct degenerate_field : std::runtime_error {
    explicit degenerate_field(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment / solver configuration (wrong scheme-sigma pairing, unknown keys, ...).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace she
