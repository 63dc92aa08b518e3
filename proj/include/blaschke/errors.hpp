#pragma once

#include <stdexcept>
#include <string>

namespace blaschke {

// Parameters outside their documented range (omega not in (0,1), tau >= 1, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation at a pole or branch point of a map or factor.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// A geometric configuration the construction cannot handle
// (-1 in E after rotation, overlapping parts, no admissible lune radius).
struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested tolerance not reachable within the term cap.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The function came too close to zero on a contour.
struct ContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace blaschke
