#pragma once

#include <stdexcept>
#include <string>

namespace qprod {

/// Base class for all engine errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Some local momentum p_j = sqrt(z^2 - 2 m V_j) is numerically zero and the
/// caller did not allow the series limiting form.
struct DegenerateLocalMomentum : Error {
    using Error::Error;
};

/// z = 0 has no normalizable amplitude set (N(z) diverges).
struct ZeroMomentum : Error {
    using Error::Error;
};

/// A zero of the denominator sits (numerically) on the counting contour and
/// jittering the rectangle did not resolve it.
struct ContourTooClose : Error {
    using Error::Error;
};

struct MaxDepthExceeded : Error {
    using Error::Error;
};

/// Newton refinement failed to converge; message carries the last iterate.
struct NonConvergence : Error {
    using Error::Error;
};

struct SamePotentialRequired : Error {
    using Error::Error;
};

/// conj(E_a) == E_b, so the Wronskian reduction of the interior integral is
/// singular and no special-case rule (norm or delta) applies.
struct DegenerateEnergyPair : Error {
    using Error::Error;
};

struct NotBound : Error {
    using Error::Error;
};

struct NotAResonance : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

} // namespace qprod
