#pragma once
// Exception hierarchy shared by all modules. Every throw site uses one of
// these named types so callers (and the CLI exit-code mapping) can dispatch
// on the failure class instead of parsing messages.

#include <stdexcept>
#include <string>

namespace auxetic {

// Root of all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input / precondition violation (CLI exit code 2).
struct InputError : Error {
    using Error::Error;
};

// Edge lengths that admit no planar assembly.
struct NoAssemblyError : InputError {
    using InputError::InputError;
};

// Lengths on a non-generic stratum (Grashof equality, tight quadrilateral
// inequality); branch tracing is refused there.
struct NonGenericError : InputError {
    using InputError::InputError;
};

// Driving angle outside the feasible range of the coupler.
struct OutOfRangeError : Error {
    using Error::Error;
};

// Fewer edge orbits than needed to pin down the period lattice.
struct UnderconnectedError : InputError {
    using InputError::InputError;
};

// No d linearly independent offsets available as a period basis.
struct BadBasisError : InputError {
    using InputError::InputError;
};

// Two edge orbits with identical offsets.
struct DuplicateEdgeError : InputError {
    using InputError::InputError;
};

// The five-point incidence system has a nullspace of dimension >= 2.
struct DegeneratePencilError : Error {
    using Error::Error;
};

// Three consecutive vertices collinear: interior angles are undefined.
struct DegenerateAngleError : Error {
    using Error::Error;
};

// Period lattice degenerate (parallel diagonals / singular omega).
struct SingularLatticeError : Error {
    using Error::Error;
};

// Finite-difference request adjacent to an excised parameter.
struct NearSingularError : Error {
    using Error::Error;
};

// Sampled path too coarse to isolate a sign change.
struct ResolutionError : Error {
    using Error::Error;
};

// Predictor-corrector failure; carries the index of the last good sample.
struct ContinuationError : Error {
    explicit ContinuationError(const std::string& what, long last_good = -1)
        : Error(what), last_good_sample(last_good) {}
    long last_good_sample;
};

// Configuration fails the consistency certificates of its spec.
struct InconsistentConfigError : Error {
    using Error::Error;
};

// Filesystem failure: unreadable spec file, unwritable output directory
// (CLI exit code 3).
struct IoError : Error {
    using Error::Error;
};

}  // namespace auxetic
