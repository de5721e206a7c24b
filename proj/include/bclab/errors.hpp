#pragma once

#include <stdexcept>
#include <string>

namespace bcl {

/// Bad resolution, bad argument ranges, mismatched lengths.
struct invalid_argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct dimension_error : invalid_argument_error {
    using invalid_argument_error::invalid_argument_error;
};

/// Linear-algebra failure: singular solve, SVD breakdown, exp overflow.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time step too large for the requested tolerance or the CFL bound.
struct step_size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A state object violates one of its structural invariants.
struct state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bcl
