//! How much entanglement survives two media, and when it can be distilled.
//!
//! The transmitted concurrence depends on the media only through the
//! symmetry ratios `τᵢ = Tᵢ₊/Tᵢ₋` and on the incident state through its
//! Schmidt weights `λ±` and the polar parameters `u`, `v`, `Φ` measured in
//! the media's frames (see [`crate::media::transfer_frames`]). This module
//! holds the closed forms and a direct numerical search that checks them.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::biphoton::{s_from_p, TwoPhotonState};
use crate::error::{Error, Result};
use crate::mat2::{Mat2, C64};
use crate::media::{transfer_frames, transmit, TransferResult, TransmissionMatrix};
use crate::optim::{multistart, MultiStart, NelderMeadOptions};
use crate::tol;

fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if !(-tol::CLAMP..=1.0 + tol::CLAMP).contains(&x) {
        return Err(Error::Internal(format!("{what} = {x} is outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn check_tau(tau: f64, name: &str) -> Result<()> {
    if tau.is_nan() || tau < 1.0 - 1e-12 {
        return Err(Error::domain(format!("{name} = {tau} must be at least 1")));
    }
    Ok(())
}

fn check_half(x: f64, name: &str) -> Result<()> {
    if !(x.abs() <= 0.5 + 1e-12) {
        return Err(Error::domain(format!(
            "{name} = {x} must lie in [-1/2, 1/2]"
        )));
    }
    Ok(())
}

/// Transmitted concurrence for an incident state with Schmidt weights
/// `λ±` and polar parameters `u`, `v`, `Φ`, through media with symmetry ratios
/// `τ₁`, `τ₂`.
///
/// The textbook form divides by `(τ₁ − 1)(τ₂ − 1)`; here that factor is
/// multiplied through so that `τᵢ = 1` is a regular point:
///
/// `P_out = P_in √(τ₁τ₂) / [λ₊ Q₊ + λ₋ Q₋ − (τ₁−1)(τ₂−1)·2√(λ₊λ₋)√((¼−u²)(¼−v²)) cos Φ]`
///
/// with `Q± = [τ₁(½ ± u) + (½ ∓ u)]·[τ₂(½ ± v) + (½ ∓ v)]`.
#[allow(clippy::too_many_arguments)]
pub fn p_out_general(
    p_in: f64,
    lambda_plus: f64,
    lambda_minus: f64,
    u: f64,
    v: f64,
    big_phi: f64,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    if !(-tol::CONCURRENCE_ARG..=1.0 + tol::CONCURRENCE_ARG).contains(&p_in) {
        return Err(Error::domain(format!("p_in = {p_in} is outside [0, 1]")));
    }
    if !(lambda_plus >= -1e-12 && lambda_minus >= -1e-12)
        || (lambda_plus + lambda_minus - 1.0).abs() > tol::NORMALIZATION
    {
        return Err(Error::domain(format!(
            "Schmidt weights ({lambda_plus}, {lambda_minus}) must be non-negative and sum to 1"
        )));
    }
    let (lp, lm) = (lambda_plus.max(0.0), lambda_minus.max(0.0));
    if (p_in * p_in - 4.0 * lp * lm).abs() > 1e-8 {
        return Err(Error::domain(format!(
            "p_in = {p_in} is inconsistent with Schmidt weights ({lp}, {lm})"
        )));
    }
    check_half(u, "u")?;
    check_half(v, "v")?;
    check_tau(tau1, "tau1")?;
    check_tau(tau2, "tau2")?;
    if !big_phi.is_finite() {
        return Err(Error::domain("Phi must be finite"));
    }
    let (u, v) = (u.clamp(-0.5, 0.5), v.clamp(-0.5, 0.5));

    let q_plus = (tau1 * (0.5 + u) + (0.5 - u)) * (tau2 * (0.5 + v) + (0.5 - v));
    let q_minus = (tau1 * (0.5 - u) + (0.5 + u)) * (tau2 * (0.5 - v) + (0.5 + v));
    let overlap = ((0.25 - u * u) * (0.25 - v * v)).max(0.0).sqrt();
    let cross = (tau1 - 1.0) * (tau2 - 1.0) * 2.0 * (lp * lm).sqrt() * overlap * big_phi.cos();
    let denominator = lp * q_plus + lm * q_minus - cross;
    if !(denominator > 0.0) {
        // Only reachable for p_in = 0 with a vanishing weight.
        return if p_in == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Internal(format!(
                "non-positive denominator {denominator}"
            )))
        };
    }
    clamp_unit(p_in * (tau1 * tau2).sqrt() / denominator, "P_out")
}

/// Transmitted concurrence for a fully entangled incident state,
/// `4√(τ₁τ₂) / [(τ₁+1)(τ₂+1) + 4a(τ₁−1)(τ₂−1)]` with `|a| ≤ ¼`.
pub fn p_out_full_entangled(tau1: f64, tau2: f64, a: f64) -> Result<f64> {
    check_tau(tau1, "tau1")?;
    check_tau(tau2, "tau2")?;
    if !(a.abs() <= 0.25 + 1e-12) {
        return Err(Error::domain(format!("a = {a} must lie in [-1/4, 1/4]")));
    }
    let denominator = (tau1 + 1.0) * (tau2 + 1.0) + 4.0 * a * (tau1 - 1.0) * (tau2 - 1.0);
    clamp_unit(4.0 * (tau1 * tau2).sqrt() / denominator, "P_out")
}

/// The combination `a = uv − √((¼−u²)(¼−v²)) cos Φ` that fixes the transmitted
/// concurrence of a fully entangled state.
pub fn entangled_mixing(u: f64, v: f64, big_phi: f64) -> f64 {
    u * v - ((0.25 - u * u) * (0.25 - v * v)).max(0.0).sqrt() * big_phi.cos()
}

/// Range of transmitted concurrence for a fully entangled incident state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferBounds {
    pub p_min: f64,
    pub p_max: f64,
    /// Best CHSH value reachable by rotating the incident polarizations.
    pub s_max: f64,
}

/// `P_min = 2√(τ₁τ₂)/(1+τ₁τ₂)`, `P_max = 2√(τ₁/τ₂)/(1+τ₁/τ₂)`.
pub fn bounds(tau1: f64, tau2: f64) -> Result<TransferBounds> {
    check_tau(tau1, "tau1")?;
    check_tau(tau2, "tau2")?;
    let product = tau1 * tau2;
    let p_min = clamp_unit(2.0 * product.sqrt() / (1.0 + product), "P_min")?;
    let p_max = p_max_of_ratio(tau1 / tau2);
    Ok(TransferBounds {
        p_min,
        p_max,
        s_max: s_from_p(p_max)?,
    })
}

fn p_max_of_ratio(ratio: f64) -> f64 {
    (2.0 * ratio.sqrt() / (1.0 + ratio)).min(1.0)
}

/// Best CHSH value as a function of the mismatch `τ₁/τ₂` alone.
pub fn s_max(ratio: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::domain(format!("ratio = {ratio} must be positive")));
    }
    s_from_p(p_max_of_ratio(ratio))
}

/// Second-order expansion of [`s_max`] about `ratio = 1`:
/// `2√2·[1 − (ratio − 1)²/16]`.
pub fn s_max_quadratic(ratio: f64) -> f64 {
    let d = ratio - 1.0;
    2.0 * std::f64::consts::SQRT_2 * (1.0 - d * d / 16.0)
}

/// Whether a fully entangled pair can be post-selected from input with
/// concurrence `p_in`, with the slack in each of the two conditions.
///
/// `margin_diff = 2 arcosh(1/P_in) − |ln(τ₁/τ₂)|` and
/// `margin_sum = ln(τ₁τ₂) − 2 arcosh(1/P_in)`; both must be non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistillationVerdict {
    pub feasible: bool,
    pub margin_diff: f64,
    pub margin_sum: f64,
}

/// Width `2 arcosh(1/P_in)` of the distillation strip in `(ln τ₁, ln τ₂)`.
pub fn strip_width(p_in: f64) -> Result<f64> {
    if !(p_in > 0.0 && p_in <= 1.0) {
        return Err(Error::domain(format!("p_in = {p_in} must lie in (0, 1]")));
    }
    Ok(2.0 * (1.0 / p_in).acosh())
}

pub fn distillable(p_in: f64, tau1: f64, tau2: f64) -> Result<DistillationVerdict> {
    let width = strip_width(p_in)?;
    check_tau(tau1, "tau1")?;
    check_tau(tau2, "tau2")?;
    let (l1, l2) = (tau1.ln(), tau2.ln());
    Ok(verdict(width, l1, l2))
}

fn verdict(width: f64, ln_tau1: f64, ln_tau2: f64) -> DistillationVerdict {
    let margin_diff = width - (ln_tau1 - ln_tau2).abs();
    let margin_sum = ln_tau1 + ln_tau2 - width;
    DistillationVerdict {
        feasible: margin_diff >= 0.0 && margin_sum >= 0.0,
        margin_diff,
        margin_sum,
    }
}

/// Verdict for a point given directly in `(ln τ₁, ln τ₂)` coordinates.
pub fn distillable_ln(p_in: f64, ln_tau1: f64, ln_tau2: f64) -> Result<DistillationVerdict> {
    let width = strip_width(p_in)?;
    if !(ln_tau1 >= 0.0 && ln_tau2 >= 0.0) {
        return Err(Error::domain("ln tau must be non-negative"));
    }
    Ok(verdict(width, ln_tau1, ln_tau2))
}

/// Edges of the distillation strip in `(ln τ₁, ln τ₂)`.
///
/// `lower` is `ln τ₂ = ln τ₁ − w`, `upper` is `ln τ₂ = ln τ₁ + w` and
/// `transverse` is `ln τ₁ + ln τ₂ = w`, with `w` the strip width. Each edge is
/// sampled uniformly in `ln τ₁` and clipped to the square `[0, ln_tau_max]²`;
/// an edge that falls outside the square is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct StripBoundary {
    pub width: f64,
    pub lower: Vec<(f64, f64)>,
    pub upper: Vec<(f64, f64)>,
    pub transverse: Vec<(f64, f64)>,
}

pub fn region_boundary(p_in: f64, ln_tau_max: f64, steps: usize) -> Result<StripBoundary> {
    if !(p_in > 0.0 && p_in < 1.0) {
        return Err(Error::domain(format!("p_in = {p_in} must lie in (0, 1)")));
    }
    if steps < 2 {
        return Err(Error::domain("steps must be at least 2"));
    }
    if !(ln_tau_max > 0.0 && ln_tau_max.is_finite()) {
        return Err(Error::domain(format!(
            "ln_tau_max = {ln_tau_max} must be positive"
        )));
    }
    let w = strip_width(p_in)?;
    let sample = |from: f64, to: f64, edge: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        if to <= from {
            return Vec::new();
        }
        (0..steps)
            .map(|k| {
                let x = from + (to - from) * k as f64 / (steps - 1) as f64;
                (x, edge(x))
            })
            .collect()
    };
    Ok(StripBoundary {
        width: w,
        lower: sample(w, ln_tau_max, &|x| x - w),
        upper: sample(0.0, ln_tau_max - w, &|x| x + w),
        transverse: sample(0.0, w.min(ln_tau_max), &|x| w - x),
    })
}

/// Settings for [`optimize_incident_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Convergence tolerance on `P_out` for each local search.
    pub tolerance: f64,
    pub max_evals: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            restarts: 32,
            seed: 0,
            tolerance: 1e-9,
            max_evals: 20_000,
        }
    }
}

/// Best incident state found by [`optimize_incident`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub best_p_out: f64,
    pub best_input: TwoPhotonState,
    /// Local rotations applied to the canonical state to obtain `best_input`.
    pub rotations: (Mat2, Mat2),
    /// Objective evaluations over all restarts.
    pub iterations: usize,
    pub converged: bool,
}

/// SU(2) rotation `R_z(α)·R_y(β)·R_z(γ)`.
pub fn euler_su2(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    let (s, c) = (0.5 * beta).sin_cos();
    let sum = 0.5 * (alpha + gamma);
    let diff = 0.5 * (alpha - gamma);
    Mat2::new(
        C64::from_polar(c, -sum),
        -C64::from_polar(s, -diff),
        C64::from_polar(s, diff),
        C64::from_polar(c, sum),
    )
}

/// Largest transmitted concurrence reachable by rotating the polarizations of
/// an incident state with concurrence `p_in`, by direct search.
pub fn optimize_incident(
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
    p_in: f64,
) -> Result<OptimizeReport> {
    optimize_incident_with(t1, t2, p_in, &OptimizeConfig::default())
}

pub fn optimize_incident_with(
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
    p_in: f64,
    config: &OptimizeConfig,
) -> Result<OptimizeReport> {
    if !(p_in > 0.0 && p_in <= 1.0) {
        return Err(Error::domain(format!("p_in = {p_in} must lie in (0, 1]")));
    }
    let canonical = TwoPhotonState::canonical(p_in)?;
    let rotations = |x: &[f64]| (euler_su2(x[0], x[1], x[2]), euler_su2(x[3], x[4], x[5]));
    let evaluate = |x: &[f64]| -> Result<(TwoPhotonState, f64)> {
        let (u, v) = rotations(x);
        let input = canonical.apply_local(&u, &v)?;
        Ok((input, transmit(&input, t1, t2)?.p_out))
    };
    // Blocked configurations score zero so the search moves away from them.
    let objective = |x: &[f64]| evaluate(x).map_or(0.0, |(_, p)| -p);

    let cfg = MultiStart {
        restarts: config.restarts,
        seed: config.seed,
        range: PI,
        local: NelderMeadOptions {
            f_tol: config.tolerance,
            x_tol: 1e-10,
            max_evals: config.max_evals,
            initial_step: FRAC_PI_2,
            rebuilds: 3,
        },
    };
    let found = multistart(objective, 6, &cfg);
    let (best_input, best_p_out) = evaluate(&found.best.x)?;
    Ok(OptimizeReport {
        best_p_out,
        best_input,
        rotations: rotations(&found.best.x),
        iterations: found.total_evals,
        converged: found.best.converged,
    })
}

/// Transmitted concurrence through the closed form, with the polar parameters
/// measured in the media's frames. A fully polarizing medium enters with a
/// capped `τ`.
pub fn p_out_analytic(
    s_in: &TwoPhotonState,
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
) -> Result<f64> {
    let frames = transfer_frames(t1, t2)?;
    let params = s_in.polar_params(&frames.u, &frames.v)?;
    p_out_general(
        s_in.concurrence(),
        params.lambda_plus,
        params.lambda_minus,
        params.u,
        params.v,
        params.big_phi,
        frames.eigs1.tau_capped(),
        frames.eigs2.tau_capped(),
    )
}

/// Bookkeeping of post-selected pairs: no entanglement is created.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YieldCheck {
    /// Entanglement per incident pair, `Z·P_out`.
    pub z_times_pout: f64,
    /// `P_in·√(T₁₊T₁₋T₂₊T₂₋)`, which `Z·P_out` must equal.
    pub expected: f64,
    /// `Z·P_out ≤ P_in` (with rounding slack) and the identity above holds.
    pub ok: bool,
}

pub fn yield_check(
    p_in: f64,
    result: &TransferResult,
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
) -> Result<YieldCheck> {
    let (e1, e2) = (t1.eigs()?, t2.eigs()?);
    let z_times_pout = result.z * result.p_out;
    let expected = p_in * (e1.t_plus * e1.t_minus * e2.t_plus * e2.t_minus).sqrt();
    let ok = z_times_pout <= p_in + 1e-12 && (z_times_pout - expected).abs() <= 1e-10;
    Ok(YieldCheck {
        z_times_pout,
        expected,
        ok,
    })
}
