#pragma once

#include <stdexcept>
#include <string>

namespace javf {

// Input bytes do not form a valid container/header.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Container is valid but the encoding is outside the supported subset.
struct UnsupportedFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation received no usable data (empty directory, too-short signal).
struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two fingerprints/segments with mismatched widths or unit counts.
struct IncompatibleFingerprints : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Representative sets do not match the allocation they claim to realize.
struct InconsistentAllocation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyDatabase : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive oracle asked to enumerate an infeasibly large instance.
struct OracleTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DP state grid would exceed the configured memory bound.
struct UseLagrangianMode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration value or invalid parameter combination.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable directory).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace javf
