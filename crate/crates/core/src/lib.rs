//! Polarization entanglement of a photon pair sent through two linear media.
//!
//! The crate is organized bottom-up:
//!
//! - [`mat2`]: closed-form complex 2×2 algebra (products, eigen and singular
//!   value decompositions).
//! - [`biphoton`]: pure two-photon states, concurrence, CHSH value, local
//!   rotations, and the polar parametrization of a state.
//! - [`media`]: transmission matrices, propagation through a pair of media,
//!   and the Lorentzian model of perforated metal films.
//! - [`transfer`]: closed forms for the transmitted concurrence, its bounds,
//!   the distillation region, and a direct numerical search over incident
//!   states that checks them.
//!
//! ```
//! use polent::{bounds, transmit, TransmissionMatrix, TwoPhotonState};
//!
//! let t1 = TransmissionMatrix::diagonal(0.9, 0.6)?;
//! let t2 = TransmissionMatrix::diagonal(0.8, 0.8)?;
//! let out = transmit(&TwoPhotonState::bell(), &t1, &t2)?;
//!
//! let tau1 = t1.eigs()?.tau()?;
//! let tau2 = t2.eigs()?.tau()?;
//! let b = bounds(tau1, tau2)?;
//! assert!(b.p_min - 1e-12 <= out.p_out && out.p_out <= b.p_max + 1e-12);
//! # Ok::<(), polent::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biphoton;
pub mod error;
pub mod mat2;
pub mod media;
pub mod optim;
pub mod sampling;
pub mod tol;
pub mod transfer;

pub use biphoton::{s_from_p, MeasurementSetting, PolarParams, TwoPhotonState};
pub use error::{Error, Result};
pub use mat2::{herm_eig, svd2, HermEig2, Mat2, Svd2, C64};
pub use media::{
    film_pair, lorentzian_t, plasmon_resonance, propagation_length, symmetry_ratio,
    transfer_frames, transmission_eigs, transmit, PlasmonFilmSpec, TransferResult,
    TransmissionEigs, TransmissionMatrix,
};
pub use transfer::{
    bounds, distillable, optimize_incident, optimize_incident_with, p_out_analytic,
    p_out_full_entangled, p_out_general, region_boundary, s_max, s_max_quadratic, strip_width,
    yield_check, DistillationVerdict, OptimizeConfig, OptimizeReport, StripBoundary,
    TransferBounds,
};

/// The guide and README, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/media.md")]
    mod media {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/distillation.md")]
    mod distillation {}
    #[doc = include_str!("../../../book/src/plasmon.md")]
    mod plasmon {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
