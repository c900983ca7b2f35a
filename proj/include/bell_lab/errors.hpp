#pragma once

#include <stdexcept>
#include <string>

namespace bell {

// A value, table, or configuration violates a documented precondition.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric routine could not certify its result. Deliberately distinct from a
// negative answer: "the solver failed" is never reported as "nonlocal".
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration would exceed the configured desk-scale cap.
struct DeskScaleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bell
