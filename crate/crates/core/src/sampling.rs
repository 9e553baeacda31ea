//! Random states, unitaries and passive media for tests and sweeps.
//!
//! All generators take an explicit RNG so callers control reproducibility.

use std::f64::consts::PI;

use rand::Rng;

use crate::biphoton::TwoPhotonState;
use crate::mat2::{Mat2, C64};
use crate::media::TransmissionMatrix;

/// Haar-random 2×2 unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let theta = rng.gen::<f64>().sqrt().asin();
    let (alpha, beta, gamma) = (
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
        rng.gen_range(-PI..PI),
    );
    let (s, c) = theta.sin_cos();
    let g = C64::from_polar(1.0, alpha);
    Mat2::new(
        g * C64::from_polar(c, beta),
        g * C64::from_polar(s, gamma),
        -g * C64::from_polar(s, -gamma),
        g * C64::from_polar(c, -beta),
    )
}

/// Matrix with independent entries uniform in the unit square of the complex plane.
pub fn random_mat<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut entry = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    Mat2::new(entry(), entry(), entry(), entry())
}

/// Random normalized pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> TwoPhotonState {
    loop {
        let m = random_mat(rng);
        if let Ok(s) = TwoPhotonState::new(m) {
            return s;
        }
    }
}

/// Random passive medium `U·diag(s₁, s₂)·W` with both singular values drawn
/// from `[s_min, 1]`.
pub fn random_medium<R: Rng + ?Sized>(rng: &mut R, s_min: f64) -> TransmissionMatrix {
    let u = random_unitary(rng);
    let w = random_unitary(rng);
    let s1 = rng.gen_range(s_min..=1.0);
    let s2 = rng.gen_range(s_min..=1.0);
    TransmissionMatrix::new(u * Mat2::diag_real(s1, s2) * w).expect("passive by construction")
}
