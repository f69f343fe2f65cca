#pragma once

#include <stdexcept>
#include <string>

namespace akmeter {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Attempt to normalize a state with vanishing norm.
struct ZeroNorm : Error {
    using Error::Error;
};

// Amplitudes at the grid edge exceed the decay threshold; the grid is too
// small for the state and periodic FFT wraparound would contaminate results.
struct BoundaryLeak : Error {
    using Error::Error;
};

// Operands live on incompatible lattices.
struct GridMismatch : Error {
    using Error::Error;
};

// A zero-padded convolution produced significant mass outside the window
// representable on the input lattice.
struct AliasingDetected : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

// Exact coordinate remapping is impossible (misaligned lattice) or the
// remapped state lost more norm than tolerated.
struct InterpolationError : Error {
    using Error::Error;
};

// Conditioning region carries probability below threshold.
struct EmptyRegion : Error {
    using Error::Error;
};

// Apparatus state does not factorize into phi_i(eps_Xi) * phi_f(eps_Xf).
struct NotFactorized : Error {
    using Error::Error;
};

struct NotPredictivelyOptimal : Error {
    using Error::Error;
};

// Marginal kernel is too far from the chi0 convolution form.
struct FormViolation : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ScenarioError : Error {
    using Error::Error;
};

}  // namespace akmeter
