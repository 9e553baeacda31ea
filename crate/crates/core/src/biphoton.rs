//! Two-photon polarization states and their entanglement.
//!
//! A pure state `Σ a_σσ′ |σσ′⟩` over `{HH, HV, VH, VV}` is stored as the 2×2
//! coefficient matrix `a`, first index for photon 1. Local polarization
//! optics act as `a → U·a·Vᵗ`; written with `V` already transposed this is
//! simply `a → U·a·V`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::mat2::{svd2, Mat2, C64};
use crate::optim::{multistart, MultiStart, NelderMeadOptions};
use crate::tol;

/// Normalized pure two-photon polarization state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    a: Mat2,
}

impl TwoPhotonState {
    /// Normalizes `a` to unit trace norm.
    pub fn new(a: Mat2) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::domain("state coefficients must be finite"));
        }
        let norm = a.norm_sqr();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(TwoPhotonState {
            a: a.map(|z| z / norm.sqrt()),
        })
    }

    /// The singlet `(|HV⟩ − |VH⟩)/√2`.
    pub fn bell() -> Self {
        TwoPhotonState {
            a: Mat2::real(0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0),
        }
    }

    /// Diagonal state `diag(√λ₊, √λ₋)` with concurrence `p_in`.
    pub fn canonical(p_in: f64) -> Result<Self> {
        let p = check_unit_interval(p_in, "p_in")?;
        let (lp, lm) = schmidt_weights(p);
        Ok(TwoPhotonState {
            a: Mat2::diag_real(lp.sqrt(), lm.sqrt()),
        })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.a
    }

    /// Concurrence `P = 2|det a|`.
    pub fn concurrence(&self) -> f64 {
        (2.0 * self.a.det().norm()).min(1.0)
    }

    /// CHSH value implied by the concurrence, `2√(1 + P²)`.
    pub fn chsh(&self) -> f64 {
        s_from_p_unchecked(self.concurrence())
    }

    /// Applies independent polarization unitaries, `a → u·a·v`.
    pub fn apply_local(&self, u: &Mat2, v: &Mat2) -> Result<Self> {
        u.ensure_unitary()?;
        v.ensure_unitary()?;
        Ok(TwoPhotonState {
            a: *u * self.a * *v,
        })
    }

    /// Schmidt weights `λ₊ ≥ λ₋`, the eigenvalues of `a·a†`.
    pub fn schmidt_weights(&self) -> (f64, f64) {
        schmidt_weights(self.concurrence())
    }

    /// Polar parameters of `u·a·v`, see [`PolarParams`].
    pub fn polar_params(&self, u: &Mat2, v: &Mat2) -> Result<PolarParams> {
        u.ensure_unitary()?;
        v.ensure_unitary()?;
        Ok(PolarParams::of(&(*u * self.a * *v)))
    }

    /// Largest CHSH value over projective polarization measurements, found by
    /// direct numerical search. Independent of the concurrence formula.
    pub fn chsh_max(&self) -> ChshOptimum {
        self.chsh_max_with(&ChshSearch::default())
    }

    pub fn chsh_max_with(&self, search: &ChshSearch) -> ChshOptimum {
        let a = self.a;
        let objective = |x: &[f64]| -chsh_value(&a, &settings_from(x));
        let cfg = MultiStart {
            restarts: search.restarts,
            seed: search.seed,
            range: PI,
            local: NelderMeadOptions {
                f_tol: search.tolerance,
                x_tol: 1e-10,
                max_evals: 20_000,
                initial_step: 0.6,
                rebuilds: 3,
            },
        };
        let found = multistart(objective, 8, &cfg);
        ChshOptimum {
            s: -found.best.f,
            settings: settings_from(&found.best.x),
        }
    }
}

/// `λ± = ½ ± ½√(1 − P²)`.
fn schmidt_weights(p: f64) -> (f64, f64) {
    let root = (1.0 - p * p).max(0.0).sqrt();
    (0.5 + 0.5 * root, 0.5 - 0.5 * root)
}

fn check_unit_interval(p: f64, name: &str) -> Result<f64> {
    if !(-tol::CONCURRENCE_ARG..=1.0 + tol::CONCURRENCE_ARG).contains(&p) {
        return Err(Error::domain(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// CHSH value `S = 2√(1 + P²)` for concurrence `p`.
pub fn s_from_p(p: f64) -> Result<f64> {
    check_unit_interval(p, "concurrence").map(s_from_p_unchecked)
}

fn s_from_p_unchecked(p: f64) -> f64 {
    2.0 * (1.0 + p * p).sqrt()
}

/// Parameters of the factorization
/// `M = e^{iφ} · [[u₊, u₋], [−ū₋, ū₊]] · diag(√λ₊, √λ₋) · [[v₊, v₋], [−v̄₋, v̄₊]]`
/// with `|u±|² = ½ ± u`, `|v±|² = ½ ± v` and `Φ = arg(u₊ ū₋ v₊ v₋)`.
///
/// The factorization is not unique. Only `λ±` and the combination that enters
/// the transmitted concurrence are physical; the individual numbers follow the
/// SVD gauge of [`svd2`]. For `λ₊ = λ₋` the convention is `u = v = 0` and the
/// remaining freedom is carried by `Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarParams {
    pub phi: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub u: f64,
    pub v: f64,
    pub big_phi: f64,
    /// The SU(2) factor on the left.
    pub left: Mat2,
    /// The SU(2) factor on the right.
    pub right: Mat2,
}

impl PolarParams {
    fn of(m: &Mat2) -> PolarParams {
        let svd = svd2(m);
        let [s1, s2] = svd.singular_values;
        let norm = s1 * s1 + s2 * s2;
        let (lambda_plus, lambda_minus) = (s1 * s1 / norm, s2 * s2 / norm);

        let half_l = half_phase(svd.left.det());
        let half_r = half_phase(svd.right.det());
        let mut left = svd.left.scale(half_l.conj());
        let mut right = svd.right.scale(half_r.conj());
        let phi = (half_l * half_r).arg();

        let degenerate = lambda_plus - lambda_minus <= 1e-12;
        if degenerate {
            (left, right) = balanced_factors(&(left * right));
        }

        let (up, um) = (left[(0, 0)], left[(0, 1)]);
        let (vp, vm) = (right[(0, 0)], right[(0, 1)]);
        let (u, v) = if degenerate {
            (0.0, 0.0)
        } else {
            (
                (up.norm_sqr() - 0.5).clamp(-0.5, 0.5),
                (vp.norm_sqr() - 0.5).clamp(-0.5, 0.5),
            )
        };
        let product = up * um.conj() * vp * vm;
        let big_phi = if product.norm() < 1e-14 {
            0.0
        } else {
            wrap_phase(product.arg())
        };
        PolarParams {
            phi,
            lambda_plus,
            lambda_minus,
            u,
            v,
            big_phi,
            left,
            right,
        }
    }

    /// `e^{iφ}·left·diag(√λ₊, √λ₋)·right`, scaled by `scale`.
    pub fn reconstruct(&self, scale: f64) -> Mat2 {
        let d = Mat2::diag_real(self.lambda_plus.sqrt(), self.lambda_minus.sqrt());
        (self.left * d * self.right).scale(C64::from_polar(scale, self.phi))
    }
}

/// `e^{i·arg(z)/2}`.
fn half_phase(z: C64) -> C64 {
    C64::from_polar(1.0, 0.5 * z.arg())
}

/// Maps an angle into `(−π, π]`.
fn wrap_phase(x: f64) -> f64 {
    if x <= -PI {
        x + 2.0 * PI
    } else {
        x
    }
}

/// Splits the SU(2) matrix `w` as `s_u·s_v` with both factors having equal
/// moduli on each row, which is `u = v = 0`.
fn balanced_factors(w: &Mat2) -> (Mat2, Mat2) {
    let (w0, w1) = (w[(0, 0)], w[(0, 1)]);
    // Need |w0 + e^{iθ} w̄1| = 1, i.e. Re(e^{iθ}·conj(w0·w1)) = 0.
    let theta = (w0 * w1).arg() + 0.5 * PI;
    let e = C64::from_polar(FRAC_1_SQRT_2, theta);
    let r = C64::from(FRAC_1_SQRT_2);
    let s_u = Mat2::new(r, e, -e.conj(), r);
    let s_v = s_u.adjoint() * *w;
    (s_u, s_v)
}

/// Direction of a projective polarization measurement on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub theta: f64,
    pub chi: f64,
}

impl MeasurementSetting {
    /// The observable `n·σ` with eigenvalues ±1.
    pub fn observable(&self) -> Mat2 {
        let (s, c) = self.theta.sin_cos();
        Mat2::new(
            C64::from(c),
            C64::from_polar(s, -self.chi),
            C64::from_polar(s, self.chi),
            C64::from(-c),
        )
    }
}

/// Correlation `⟨ψ| A ⊗ B |ψ⟩ = Tr(a†·A·a·Bᵗ)` of two ±1 observables.
pub fn correlation(a: &Mat2, first: &MeasurementSetting, second: &MeasurementSetting) -> f64 {
    let lhs = first.observable();
    let rhs = second.observable();
    (a.adjoint() * lhs * *a * rhs.transpose()).trace().re
}

/// `E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` for settings `[a, a′, b, b′]`.
pub fn chsh_value(a: &Mat2, settings: &[MeasurementSetting; 4]) -> f64 {
    let [x, x2, y, y2] = settings;
    correlation(a, x, y) - correlation(a, x, y2) + correlation(a, x2, y) + correlation(a, x2, y2)
}

fn settings_from(x: &[f64]) -> [MeasurementSetting; 4] {
    std::array::from_fn(|k| MeasurementSetting {
        theta: x[2 * k],
        chi: x[2 * k + 1],
    })
}

/// Search settings for [`TwoPhotonState::chsh_max_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChshSearch {
    pub restarts: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for ChshSearch {
    fn default() -> Self {
        ChshSearch {
            restarts: 16,
            seed: 0,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshOptimum {
    pub s: f64,
    /// `[a, a′, b, b′]`: two settings for photon 1, then two for photon 2.
    pub settings: [MeasurementSetting; 4],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_state, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bell_input_is_normalized() {
        let s = TwoPhotonState::new(Mat2::real(0.0, 1.0, -1.0, 0.0)).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((s.matrix()[(0, 1)].re - h).abs() < 1e-15);
        assert!((s.matrix()[(1, 0)].re + h).abs() < 1e-15);
        assert!((*s.matrix() - *TwoPhotonState::bell().matrix()).frobenius() < 1e-15);
    }

    #[test]
    fn rescaling_and_zero() {
        let s = TwoPhotonState::new(Mat2::diag_real(2.0, 0.0)).unwrap();
        assert_eq!(*s.matrix(), Mat2::diag_real(1.0, 0.0));
        assert_eq!(TwoPhotonState::new(Mat2::ZERO), Err(Error::ZeroState));
    }

    #[test]
    fn concurrence_examples() {
        assert!((TwoPhotonState::bell().concurrence() - 1.0).abs() < 1e-15);
        let hh = TwoPhotonState::new(Mat2::diag_real(1.0, 0.0)).unwrap();
        assert_eq!(hh.concurrence(), 0.0);
        let s = TwoPhotonState::new(Mat2::diag_real(0.9f64.sqrt(), 0.1f64.sqrt())).unwrap();
        assert!((s.concurrence() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn s_from_p_examples() {
        assert!((s_from_p(1.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s_from_p(0.0).unwrap(), 2.0);
        assert!((s_from_p(0.6).unwrap() - 2.0 * 1.36f64.sqrt()).abs() < 1e-15);
        assert!((s_from_p(0.6).unwrap() - 2.332_380_757_938_12).abs() < 1e-12);
        assert!(matches!(s_from_p(1.1), Err(Error::Domain(_))));
        assert!(matches!(s_from_p(-0.01), Err(Error::Domain(_))));
        assert!(s_from_p(1.0 + 1e-13).is_ok());
    }

    #[test]
    fn apply_local_keeps_concurrence() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = TwoPhotonState::bell();
        assert_eq!(s.apply_local(&Mat2::IDENTITY, &Mat2::IDENTITY).unwrap(), s);
        let diag = TwoPhotonState::new(Mat2::diag_real(0.8f64.sqrt(), 0.2f64.sqrt())).unwrap();
        for _ in 0..100 {
            let (u, v) = (random_unitary(&mut rng), random_unitary(&mut rng));
            let out = s.apply_local(&u, &v).unwrap();
            assert!((out.concurrence() - 1.0).abs() < 1e-12);
            let out = diag.apply_local(&u, &v).unwrap();
            assert!((out.concurrence() - 0.8).abs() < 1e-12);
            assert!((out.matrix().norm_sqr() - 1.0).abs() < 1e-10);
        }
        let not_unitary = Mat2::diag_real(1.0, 0.5);
        assert!(matches!(
            s.apply_local(&not_unitary, &Mat2::IDENTITY),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn canonical_state_examples() {
        let s = TwoPhotonState::canonical(1.0).unwrap();
        assert!((*s.matrix() - Mat2::diag_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).frobenius() < 1e-16);
        assert_eq!(
            *TwoPhotonState::canonical(0.0).unwrap().matrix(),
            Mat2::diag_real(1.0, 0.0)
        );

        let s = TwoPhotonState::canonical(0.5).unwrap();
        let root = 0.75f64.sqrt();
        let expected = Mat2::diag_real((0.5 + 0.5 * root).sqrt(), (0.5 - 0.5 * root).sqrt());
        assert!((*s.matrix() - expected).frobenius() < 1e-16);
        assert!((s.concurrence() - 0.5).abs() < 1e-12);
        assert!(TwoPhotonState::canonical(1.5).is_err());
    }

    #[test]
    fn polar_params_of_diagonal_state() {
        let s = TwoPhotonState::new(Mat2::diag_real(0.8f64.sqrt(), 0.2f64.sqrt())).unwrap();
        let p = s.polar_params(&Mat2::IDENTITY, &Mat2::IDENTITY).unwrap();
        assert!((p.lambda_plus - 0.8).abs() < 1e-15);
        assert!((p.lambda_minus - 0.2).abs() < 1e-15);
        assert!((p.u.abs() - 0.5).abs() < 1e-15 && (p.v.abs() - 0.5).abs() < 1e-15);
        assert_eq!(p.big_phi, 0.0);
    }

    #[test]
    fn polar_params_of_bell_pair() {
        let p = TwoPhotonState::bell()
            .polar_params(&Mat2::IDENTITY, &Mat2::IDENTITY)
            .unwrap();
        assert!((p.lambda_plus - 0.5).abs() < 1e-15);
        assert!((p.lambda_minus - 0.5).abs() < 1e-15);
        assert_eq!((p.u, p.v), (0.0, 0.0));
        assert!((p.reconstruct(1.0) - *TwoPhotonState::bell().matrix()).frobenius() < 1e-14);
    }

    #[test]
    fn polar_params_reconstruct_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let s = random_state(&mut rng);
            let (u, v) = (random_unitary(&mut rng), random_unitary(&mut rng));
            let p = s.polar_params(&u, &v).unwrap();
            let target = u * *s.matrix() * v;
            assert!((p.reconstruct(1.0) - target).frobenius() < 1e-10);
            assert!((p.left.det() - 1.0).norm() < 1e-12);
            assert!((p.right.det() - 1.0).norm() < 1e-12);
            assert!((p.lambda_plus + p.lambda_minus - 1.0).abs() < 1e-12);
            assert!(p.lambda_plus >= p.lambda_minus);
            assert!(p.big_phi > -PI && p.big_phi <= PI);
            // SU(2) row moduli match u and v.
            assert!((p.left[(0, 1)].norm_sqr() - (0.5 - p.u)).abs() < 1e-12);
            assert!((p.right[(0, 1)].norm_sqr() - (0.5 - p.v)).abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_factorization_of_degenerate_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let (u, v) = (random_unitary(&mut rng), random_unitary(&mut rng));
            let p = TwoPhotonState::bell().polar_params(&u, &v).unwrap();
            assert_eq!((p.u, p.v), (0.0, 0.0));
            let target = u * *TwoPhotonState::bell().matrix() * v;
            assert!((p.reconstruct(1.0) - target).frobenius() < 1e-10);
            assert!(p.right.unitarity_defect() < 1e-12);
            assert!((p.right[(0, 0)].norm_sqr() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_oracle_examples() {
        let bell = TwoPhotonState::bell().chsh_max();
        assert!((bell.s - 2.0 * 2f64.sqrt()).abs() < 1e-6, "{}", bell.s);

        let hh = TwoPhotonState::new(Mat2::diag_real(1.0, 0.0))
            .unwrap()
            .chsh_max();
        assert!((hh.s - 2.0).abs() < 1e-6, "{}", hh.s);

        let partial = TwoPhotonState::new(Mat2::diag_real(0.9f64.sqrt(), 0.1f64.sqrt())).unwrap();
        let found = partial.chsh_max();
        assert!((found.s - 2.0 * 1.36f64.sqrt()).abs() < 1e-6, "{}", found.s);
        // The reported settings reproduce the reported value.
        assert!((chsh_value(partial.matrix(), &found.settings) - found.s).abs() < 1e-15);
    }

    #[test]
    fn correlation_of_singlet_is_minus_cosine() {
        let bell = TwoPhotonState::bell();
        let z = MeasurementSetting {
            theta: 0.0,
            chi: 0.0,
        };
        let tilted = MeasurementSetting {
            theta: 0.7,
            chi: 0.0,
        };
        let e = correlation(bell.matrix(), &z, &tilted);
        assert!((e + 0.7f64.cos()).abs() < 1e-15);
    }
}
