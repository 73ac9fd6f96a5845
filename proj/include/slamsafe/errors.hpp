#pragma once

#include <stdexcept>
#include <string>

namespace slamsafe {

// Thrown when a swept motion segment crosses a wall. Callers treat the
// offending action as inadmissible rather than fatal.
struct CollisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Schema-version mismatch or malformed artifact file.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-class input where two classes are required.
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when every recovery round fails to produce a safe admissible
// candidate. Carries the progress made so failure reports keep the counts.
struct StuckError : std::runtime_error {
    StuckError(const std::string& what, int steps_done = 0, int recoveries_done = 0)
        : std::runtime_error(what), steps(steps_done), recoveries(recoveries_done) {}
    int steps{0};
    int recoveries{0};
};

struct MissingArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace slamsafe
