#pragma once

// Central numeric policy. Every comparison tolerance used by the library,
// the test suite, and the audit runner is pinned here so that a report's
// pass/fail verdicts are reproducible and auditable.

namespace qte {
namespace tol {

// Residual allowed when two operators or scalars must be equal.
inline constexpr double identity = 1e-10;

// Slack allowed below zero when checking "lhs <= rhs" style inequalities.
inline constexpr double inequality = 1e-9;

// Hermiticity: max abs entry of (A - A^dagger) must stay below this.
inline constexpr double hermiticity = 1e-10;

// Kraus completeness: max abs entry of (sum K^dagger K - I).
inline constexpr double completeness = 1e-9;

// Smallest Choi eigenvalue tolerated when certifying complete positivity.
inline constexpr double choi_floor = -1e-9;

// Eigenvalues of a nominally PSD operator may dip this far below zero
// before the square root refuses; anything in [floor, 0) is clamped to 0.
inline constexpr double psd_clamp_floor = -1e-10;

// Trace preservation of a partial trace and of channel application.
inline constexpr double trace_preservation = 1e-12;

// Serialization round trip (matrices written and re-read).
inline constexpr double round_trip = 1e-15;

// Probability bookkeeping: distributions must sum to one this tightly,
// and the scalar probability lemmas are checked with this slack.
inline constexpr double probability = 1e-12;

}  // namespace tol

namespace limits {

// Default cap on any Hilbert space dimension accepted by the audit runner.
inline constexpr int default_dim_cap = 256;

// Hard ceiling on a single dimension anywhere in the library.
inline constexpr int max_dim = 512;

// Hard ceiling on entries of one dense matrix (64 MiB of complex doubles).
inline constexpr long long max_matrix_entries = 1LL << 22;

}  // namespace limits
}  // namespace qte
