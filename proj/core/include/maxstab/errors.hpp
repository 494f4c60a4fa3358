#pragma once

#include <stdexcept>

namespace maxstab {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mixing max-plus and max-product operands.
struct AlgebraMismatch : Error {
    using Error::Error;
};

/// Incompatible shapes, out-of-range indices, missing inputs.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Value outside the algebra's domain (NaN, negative max-product entry, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Transition matrix is not row-stochastic.
struct NotStochastic : Error {
    using Error::Error;
};

/// An infinite join with unbounded entries (cycle mean at or above one).
struct Divergent : Error {
    using Error::Error;
};

/// Mode-path enumeration would exceed the configured cap.
struct PathExplosion : Error {
    using Error::Error;
};

/// Statistics requested from data that cannot support them.
struct DegenerateData : Error {
    using Error::Error;
};

/// State-dependent dynamics hit an undefined 0/0 component ratio.
struct ZeroState : Error {
    using Error::Error;
};

/// Malformed input file.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace maxstab
