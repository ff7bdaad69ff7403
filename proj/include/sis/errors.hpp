#pragma once

#include <stdexcept>
#include <string>

namespace sis {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dilation
struct NotSquare : Error { using Error::Error; };
struct NonInteger : Error { using Error::Error; };
struct NotExpansive : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct PowerRangeExceeded : Error { using Error::Error; };
struct SearchExhausted : Error { using Error::Error; };

// genspace
struct TailUnbounded : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NotPrincipal : Error { using Error::Error; };
struct FilterUnbounded : Error { using Error::Error; };
struct FilterInconsistent : Error { using Error::Error; };

// geometry / criteria / wavelets
struct EmptyDenominator : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct NegativeSpectral : Error { using Error::Error; };
struct QuadratureNonConvergent : Error { using Error::Error; };

// configuration / IO
struct ConfigError : Error { using Error::Error; };

}  // namespace sis
