#pragma once

#include <stdexcept>
#include <string>

namespace thompson {

// Base class for every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Textual input (rational, word, JSON) could not be parsed.
struct parse_error : error {
    using error::error;
};

// Breakpoint sequence is not strictly increasing in x or in y.
struct not_monotone : error {
    using error::error;
};

// A total map's breakpoints do not start at (0,0) and end at (1,1).
struct bad_endpoints : error {
    using error::error;
};

// Evaluation point lies outside the map's domain.
struct out_of_domain : error {
    using error::error;
};

// Two-sided slope requested at a genuine corner.
struct non_differentiable : error {
    using error::error;
};

// A rational is not on the requested n^-r grid.
struct level_too_low : error {
    using error::error;
};

// Arguments violate a documented constraint (bad base, empty interval, ...).
struct invalid_parameters : error {
    using error::error;
};

// A word references a generator name missing from the alphabet.
struct unbound_letter : error {
    using error::error;
};

// A documented operation precondition does not hold.
struct precondition_violated : error {
    using error::error;
};

// An internal invariant failed; indicates a bug, not a caller mistake.
struct internal_error : error {
    using error::error;
};

} // namespace thompson
