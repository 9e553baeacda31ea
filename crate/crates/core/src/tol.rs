//! Numerical tolerances shared across the crate.

/// Maximum ‖A − A†‖_F accepted as Hermitian input.
pub const HERMITIAN: f64 = 1e-10;

/// Maximum ‖U·U† − I‖_F accepted as a unitary input.
pub const UNITARY: f64 = 1e-10;

/// Slack on the unit trace norm of a two-photon state.
pub const NORMALIZATION: f64 = 1e-10;

/// Passive media may exceed unit transmission by at most this much (rounding).
pub const PASSIVE: f64 = 1e-10;

/// Analytic results this close outside `[0, 1]` are clamped, larger excursions are bugs.
pub const CLAMP: f64 = 1e-10;

/// Slack on the `[0, 1]` range of a concurrence passed as an argument.
pub const CONCURRENCE_ARG: f64 = 1e-12;

/// Coincidence probability below which the transmitted state is undefined.
pub const BLOCKED: f64 = 1e-14;

/// Stand-in for an infinite symmetry ratio when a channel is fully polarizing.
pub const TAU_CAP: f64 = 1e12;
