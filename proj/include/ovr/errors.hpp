#pragma once

#include <stdexcept>
#include <string>

namespace ovr {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- simplex operations ---
struct PositiveLossZeroProb : Error { using Error::Error; };
struct InvalidPMin : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// --- weighted tree ---
struct NegativeWeight : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ZeroTotal : Error { using Error::Error; };

// --- samplers ---
struct NonPositiveGamma : Error { using Error::Error; };
struct InvalidTheta : Error { using Error::Error; };
struct NonPositiveBound : Error { using Error::Error; };
struct LossBoundViolated : Error { using Error::Error; };
struct NegativeLoss : Error { using Error::Error; };
struct StaleTicket : Error { using Error::Error; };

// --- harness ---
struct NonObliviousAdversary : Error { using Error::Error; };
struct HorizonTooShort : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

// --- datasets and trainers ---
struct IoFailure : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct BadMix : Error { using Error::Error; };
struct NoLabels : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };

// --- cli ---
struct UsageError : Error { using Error::Error; };

}  // namespace ovr
