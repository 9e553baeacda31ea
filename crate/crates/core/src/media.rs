//! Linear media: transmission matrices, propagation of a photon pair, and the
//! Lorentzian model of a perforated metal film.

use std::f64::consts::PI;

use crate::biphoton::TwoPhotonState;
use crate::error::{Error, Result};
use crate::mat2::{herm_eig, svd2, Mat2};
use crate::tol;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Polarization transmission amplitudes `t_σσ′` of a passive medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionMatrix(Mat2);

impl TransmissionMatrix {
    /// Rejects non-finite, zero, and amplifying matrices.
    pub fn new(t: Mat2) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain("transmission amplitudes must be finite"));
        }
        if t == Mat2::ZERO {
            return Err(Error::ZeroMedium);
        }
        let largest = svd2(&t).singular_values[0].powi(2);
        if largest > 1.0 + tol::PASSIVE {
            return Err(Error::GainMedium { largest });
        }
        Ok(TransmissionMatrix(t))
    }

    pub fn identity() -> Self {
        TransmissionMatrix(Mat2::IDENTITY)
    }

    /// Diagonal medium with real amplitudes along H and V.
    pub fn diagonal(h: f64, v: f64) -> Result<Self> {
        TransmissionMatrix::new(Mat2::diag_real(h, v))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn eigs(&self) -> Result<TransmissionEigs> {
        transmission_eigs(self)
    }
}

/// Transmission eigenvalues `0 ≤ T₋ ≤ T₊ ≤ 1` and the eigenbasis of `t·t†`,
/// `t·t† = basis†·diag(T₊, T₋)·basis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionEigs {
    pub t_plus: f64,
    pub t_minus: f64,
    pub basis: Mat2,
}

impl TransmissionEigs {
    /// Symmetry ratio `τ = T₊/T₋`.
    pub fn tau(&self) -> Result<f64> {
        if self.t_minus <= 0.0 {
            return Err(Error::SingularChannel);
        }
        Ok(self.t_plus / self.t_minus)
    }

    /// `τ`, with a fully polarizing channel mapped to a large finite value.
    ///
    /// The analytic formulas lose accuracy as τ grows; at the cap they are only
    /// meaningful as a limit.
    pub fn tau_capped(&self) -> f64 {
        match self.tau() {
            Ok(t) => t.min(tol::TAU_CAP),
            Err(_) => tol::TAU_CAP,
        }
    }
}

/// Eigen-decomposition of `t·t†`.
pub fn transmission_eigs(t: &TransmissionMatrix) -> Result<TransmissionEigs> {
    eigs_of_gram(&(t.0 * t.0.adjoint()))
}

fn eigs_of_gram(gram: &Mat2) -> Result<TransmissionEigs> {
    let eig = herm_eig(gram)?;
    let [hi, lo] = eig.values;
    if hi > 1.0 + tol::PASSIVE {
        return Err(Error::GainMedium { largest: hi });
    }
    let clamp = |x: f64| {
        if x < 0.0 && x > -tol::PASSIVE {
            0.0
        } else if x > 1.0 {
            1.0
        } else {
            x
        }
    };
    Ok(TransmissionEigs {
        t_plus: clamp(hi),
        t_minus: clamp(lo),
        basis: eig.vectors,
    })
}

/// Frames in which the transmitted concurrence takes its analytic form.
///
/// With `B = u·a·v` the coincidence rate is `Z = Σ_jk T₁ⱼ T₂ₖ |B_jk|²`, the
/// transmission eigenvalues ordered `(T₊, T₋)`. `u` diagonalizes `t₁†·t₁` and
/// `v` is the transposed eigenbasis of `t₂†·t₂`; pass them to
/// [`TwoPhotonState::polar_params`] before evaluating
/// [`crate::transfer::p_out_general`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFrames {
    pub u: Mat2,
    pub v: Mat2,
    pub eigs1: TransmissionEigs,
    pub eigs2: TransmissionEigs,
}

pub fn transfer_frames(t1: &TransmissionMatrix, t2: &TransmissionMatrix) -> Result<TransferFrames> {
    let eigs1 = eigs_of_gram(&(t1.0.adjoint() * t1.0))?;
    let eigs2 = eigs_of_gram(&(t2.0.adjoint() * t2.0))?;
    Ok(TransferFrames {
        u: eigs1.basis,
        v: eigs2.basis.transpose(),
        eigs1,
        eigs2,
    })
}

/// Outcome of sending a photon pair through two media.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferResult {
    pub state_out: TwoPhotonState,
    /// Coincidence probability `Tr[(t₁·a·t₂ᵗ)(t₁·a·t₂ᵗ)†]`.
    pub z: f64,
    pub p_out: f64,
    pub s_out: f64,
}

/// Propagates `s_in` with photon 1 through `t1` and photon 2 through `t2`.
pub fn transmit(
    s_in: &TwoPhotonState,
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
) -> Result<TransferResult> {
    let raw = t1.0 * *s_in.matrix() * t2.0.transpose();
    let z = raw.norm_sqr();
    if !(z > tol::BLOCKED) {
        return Err(Error::FullyBlocked { z });
    }
    let state_out = TwoPhotonState::new(raw)?;
    let p_out = state_out.concurrence();
    Ok(TransferResult {
        state_out,
        z,
        p_out,
        s_out: state_out.chsh(),
    })
}

/// Lorentzian transmission probability `𝒯Γ²/((ω₀ − ω_res)² + Γ²)`.
pub fn lorentzian_t(omega0: f64, omega_res: f64, gamma: f64, t_peak: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "linewidth must be positive, got {gamma}"
        )));
    }
    if !(t_peak > 0.0 && t_peak <= 1.0) {
        return Err(Error::domain(format!(
            "peak transmission must lie in (0, 1], got {t_peak}"
        )));
    }
    if !omega0.is_finite() || !omega_res.is_finite() {
        return Err(Error::domain("frequencies must be finite"));
    }
    let detuning = omega0 - omega_res;
    Ok(t_peak * gamma * gamma / (detuning * detuning + gamma * gamma))
}

/// Surface-plasmon resonance `√(1 + 1/ε)·2πnc/L` of a hole lattice.
pub fn plasmon_resonance(lattice: f64, n: u32, epsilon: f64) -> Result<f64> {
    if !(lattice > 0.0) || !lattice.is_finite() {
        return Err(Error::domain(format!(
            "lattice constant must be positive, got {lattice}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("resonance order must be at least 1"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok((1.0 + 1.0 / epsilon).sqrt() * 2.0 * PI * f64::from(n) * SPEED_OF_LIGHT / lattice)
}

/// Plasmon propagation length `l = (c/Γ)·√((ε + 1)/ε)`.
pub fn propagation_length(gamma: f64, epsilon: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "linewidth must be positive, got {gamma}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(SPEED_OF_LIGHT / gamma * ((epsilon + 1.0) / epsilon).sqrt())
}

/// A metal film perforated by a rectangular hole array, in the Lorentzian
/// resonance model. Lengths in meters, `gamma` in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonFilmSpec {
    /// Lattice constant along the H axis.
    pub lattice_a: f64,
    /// Lattice constant along the V axis.
    pub lattice_b: f64,
    pub order_n: u32,
    pub gamma: f64,
    pub t_peak: f64,
    pub epsilon: f64,
}

impl PlasmonFilmSpec {
    /// A square array.
    pub fn square(lattice: f64, order_n: u32, gamma: f64, t_peak: f64, epsilon: f64) -> Self {
        PlasmonFilmSpec {
            lattice_a: lattice,
            lattice_b: lattice,
            order_n,
            gamma,
            t_peak,
            epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("lattice_a", self.lattice_a), ("lattice_b", self.lattice_b)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {x}")));
            }
        }
        if self.order_n == 0 {
            return Err(Error::domain("order_n must be at least 1"));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.t_peak > 0.0 && self.t_peak <= 1.0) {
            return Err(Error::domain(format!(
                "t_peak must lie in (0, 1], got {}",
                self.t_peak
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Resonance frequencies along the two lattice axes.
    pub fn resonances(&self) -> Result<(f64, f64)> {
        self.validate()?;
        Ok((
            plasmon_resonance(self.lattice_a, self.order_n, self.epsilon)?,
            plasmon_resonance(self.lattice_b, self.order_n, self.epsilon)?,
        ))
    }

    /// Transmission probabilities along the two lattice axes at `omega0`.
    pub fn transmissions(&self, omega0: f64) -> Result<(f64, f64)> {
        let (wa, wb) = self.resonances()?;
        Ok((
            lorentzian_t(omega0, wa, self.gamma, self.t_peak)?,
            lorentzian_t(omega0, wb, self.gamma, self.t_peak)?,
        ))
    }

    /// Diagonal transmission matrix with positive real amplitudes
    /// `diag(√T_a, √T_b)`, lattice axes along H and V.
    pub fn transmission_matrix(&self, omega0: f64) -> Result<TransmissionMatrix> {
        let (ta, tb) = self.transmissions(omega0)?;
        TransmissionMatrix::diagonal(ta.sqrt(), tb.sqrt())
    }
}

/// Transmission matrices of two films illuminated at `omega0`.
pub fn film_pair(
    spec1: &PlasmonFilmSpec,
    spec2: &PlasmonFilmSpec,
    omega0: f64,
) -> Result<(TransmissionMatrix, TransmissionMatrix)> {
    Ok((
        spec1.transmission_matrix(omega0)?,
        spec2.transmission_matrix(omega0)?,
    ))
}

/// `τ₁/τ₂ = 1 + (2π)²(nl/L₀ − nl/L₁)²` for a rectangular film (`L₀`, `L₁`)
/// paired with a square film (`L₀`), illuminated on the `L₀` resonance.
pub fn symmetry_ratio(l0: f64, l1: f64, n: u32, gamma: f64, epsilon: f64) -> Result<f64> {
    for (name, x) in [("l0", l0), ("l1", l1)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive, got {x}")));
        }
    }
    if n == 0 {
        return Err(Error::domain("resonance order must be at least 1"));
    }
    let l = propagation_length(gamma, epsilon)?;
    let nl = f64::from(n) * l;
    let mismatch = 2.0 * PI * (nl / l0 - nl / l1);
    Ok(1.0 + mismatch * mismatch)
}
