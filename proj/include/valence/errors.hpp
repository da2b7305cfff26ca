#pragma once

#include <stdexcept>
#include <string>

namespace valence {

// Malformed input: JSON, names, arena invariants.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation called outside its domain (e.g. geodesic length on a non-group element).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured budget was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The arena's graph admits no decision procedure; only the oracle applies.
struct UndecidableClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace valence
