#pragma once

namespace cbd::tol {

/// pmf entries must sum to 1 within this bound.
inline constexpr double kProbabilitySum = 1e-9;

/// Entries in [-kNegativeClamp, 0) are clamped to 0 on ingestion;
/// anything below is a validation violation.
inline constexpr double kNegativeClamp = 1e-12;

/// Reconstructed pmf entries below -kExpectationFeasibility mean the
/// expectation triple is infeasible.
inline constexpr double kExpectationFeasibility = 1e-9;

/// Contextuality verdict threshold on CNTX (CBD_TOLERANCE overrides in the CLI).
inline constexpr double kVerdict = 1e-9;

/// LP feasibility / residual tolerance (max norm).
inline constexpr double kLpFeasibility = 1e-8;

/// Simplex pivot magnitude tolerance.
inline constexpr double kLpPivot = 1e-10;

/// Atom nonnegativity slack in certificates.
inline constexpr double kLpAtomNegative = 1e-10;

/// Agreement bound between the closed-form and LP values of delta_min.
inline constexpr double kClosedVsLp = 1e-7;

/// Agreement bound between closed-form and exhaustive signed sums.
inline constexpr double kExhaustive = 1e-12;

} // namespace cbd::tol
