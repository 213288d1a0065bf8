#pragma once

#include <stdexcept>
#include <string>

namespace aplab {

// Bad argument / violated precondition supplied by the caller.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Work or memory beyond the configured budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical or logical invariant broke inside the library.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace aplab
