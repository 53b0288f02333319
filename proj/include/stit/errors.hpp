#pragma once

#include <stdexcept>
#include <string>

namespace stit {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cut produced a piece with volume below the degeneracy threshold.
// Signals a measure-zero grazing event; samplers resample on catching it.
struct DegenerateCut : Error {
    using Error::Error;
};

// Tuple fails the binary-tree validity conditions.
struct InvalidTuple : Error {
    using Error::Error;
};

// Word passed to extend() is not a current leaf.
struct NotALeaf : Error {
    using Error::Error;
};

// Index or time argument outside its admissible range.
struct OutOfRange : Error {
    using Error::Error;
};

// Enumeration request beyond the supported depth.
struct TooLarge : Error {
    using Error::Error;
};

// Label not present in the tessellation.
struct UnknownLabel : Error {
    using Error::Error;
};

// Hyperplane does not meet the required cell (or window).
struct NoHit : Error {
    using Error::Error;
};

// Jump time does not exceed the last recorded jump time.
struct NonmonotoneTime : Error {
    using Error::Error;
};

// Subwindow is not contained in the window.
struct NotContained : Error {
    using Error::Error;
};

// Rejection sampler exceeded its proposal budget.
struct RejectionOverflow : Error {
    using Error::Error;
};

// Two rates coincide within the degeneracy tolerance.
struct DegenerateRates : Error {
    using Error::Error;
};

// Too few observations (or bins) to run a statistical test.
struct InsufficientData : Error {
    using Error::Error;
};

// Malformed or invalid configuration input; message names the bad field.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace stit
