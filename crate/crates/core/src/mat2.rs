//! Closed-form complex 2×2 linear algebra.
//!
//! Every matrix in this crate is 2×2 and indexed by polarization (`H = 0`,
//! `V = 1`), so the decompositions below are written out explicitly instead of
//! going through a general-purpose solver. The results are exact up to a few
//! ulps and behave predictably at degenerate spectra.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Complex scalar.
pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Complex 2×2 matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    /// Matrix with real entries `[[a, b], [c, d]]`.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn diag_real(a: f64, d: f64) -> Self {
        Mat2::diag(a.into(), d.into())
    }

    pub fn scale(&self, k: C64) -> Mat2 {
        self.map(|z| z * k)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Mat2 {
        let m = &self.0;
        Mat2([[f(m[0][0]), f(m[0][1])], [f(m[1][0]), f(m[1][1])]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn conj(&self) -> Mat2 {
        self.map(|z| z.conj())
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Squared Frobenius norm, `Tr(A·A†)`.
    pub fn norm_sqr(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        self.0.iter().flat_map(|row| row.iter().copied())
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖A·A† − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.mul(&self.adjoint()) - Mat2::IDENTITY).frobenius()
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius()
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_defect();
        if deviation <= tol::UNITARY {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    pub fn row(&self, i: usize) -> [C64; 2] {
        self.0[i]
    }

    pub fn col(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::ZERO
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|z| -z)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::mul(&self, &rhs)
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: C64) -> Mat2 {
        self.scale(k)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: f64) -> Mat2 {
        self.map(|z| z * k)
    }
}

/// Spectral decomposition of a Hermitian matrix, `A = U†·diag(λ)·U`.
///
/// Row `k` of `vectors` is the bra `⟨e_k|` of the eigenvector belonging to
/// `values[k]`. Eigenvalues are in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermEig2 {
    pub values: [f64; 2],
    pub vectors: Mat2,
}

impl HermEig2 {
    pub fn reconstruct(&self) -> Mat2 {
        let d = Mat2::diag_real(self.values[0], self.values[1]);
        self.vectors.adjoint() * d * self.vectors
    }
}

/// Singular value decomposition `A = left·diag(s)·right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub left: Mat2,
    pub singular_values: [f64; 2],
    pub right: Mat2,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Mat2 {
        let [s1, s2] = self.singular_values;
        self.left * Mat2::diag_real(s1, s2) * self.right
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
///
/// Degenerate (or numerically degenerate) spectra return the identity as the
/// eigenvector matrix.
pub fn herm_eig(a: &Mat2) -> Result<HermEig2> {
    let deviation = a.hermiticity_defect();
    if deviation > tol::HERMITIAN || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    let p = a[(0, 0)].re;
    let q = a[(1, 1)].re;
    // Average the two off-diagonal estimates so a slightly non-Hermitian input
    // is treated as its Hermitian part.
    let b = (a[(0, 1)] + a[(1, 0)].conj()) * 0.5;

    if b == ZERO {
        let (values, vectors) = if p >= q {
            ([p, q], Mat2::IDENTITY)
        } else {
            ([q, p], Mat2::real(0.0, 1.0, 1.0, 0.0))
        };
        return Ok(HermEig2 { values, vectors });
    }

    let mean = 0.5 * (p + q);
    let half_gap = 0.5 * (p - q);
    let radius = half_gap.hypot(b.norm());
    let values = [mean + radius, mean - radius];

    let scale = p.abs().max(q.abs()).max(b.norm());
    if radius <= 4.0 * f64::EPSILON * scale {
        return Ok(HermEig2 {
            values,
            vectors: Mat2::IDENTITY,
        });
    }

    // Eigenvector for the upper eigenvalue, taken from whichever row of
    // (A − λ₊) avoids cancellation.
    let (x0, x1) = if half_gap >= 0.0 {
        (C64::from(radius + half_gap), b.conj())
    } else {
        (b, C64::from(radius - half_gap))
    };
    let norm = x0.norm().hypot(x1.norm());
    let (e0, e1) = (x0 / norm, x1 / norm);
    // ⟨e₊| in the first row and ⟨e₋| in the second, with e₋ = (−ē₁, ē₀).
    let vectors = Mat2::new(e0.conj(), e1.conj(), -e1, e0);
    Ok(HermEig2 { values, vectors })
}

/// Singular value decomposition of an arbitrary complex 2×2 matrix.
///
/// Gauge: in each column of `left` the entry of largest magnitude is real and
/// positive (the first one on ties); the compensating phases sit in `right`.
pub fn svd2(a: &Mat2) -> Svd2 {
    let gram = *a * a.adjoint();
    // A·A† is Hermitian by construction, so this cannot fail.
    let eig = herm_eig(&gram).expect("A·A† is Hermitian");

    let mut left = eig.vectors.adjoint();
    for j in 0..2 {
        let [c0, c1] = left.col(j);
        let pivot = if c1.norm() > c0.norm() { c1 } else { c0 };
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            left[(0, j)] *= phase;
            left[(1, j)] *= phase;
        }
    }

    // Rows of L†·A are s_k times the rows of the right factor.
    let projected = left.adjoint() * *a;
    let [p0, p1] = [projected.row(0), projected.row(1)];
    let s1 = p0[0].norm().hypot(p0[1].norm());
    if s1 == 0.0 {
        return Svd2 {
            left,
            singular_values: [0.0, 0.0],
            right: Mat2::IDENTITY,
        };
    }
    let r0 = [p0[0] / s1, p0[1] / s1];
    // Unit row orthogonal to r0; the second right row is a phase times it.
    let complement = [-r0[1].conj(), r0[0].conj()];
    let overlap = p1[0] * complement[0].conj() + p1[1] * complement[1].conj();
    let s2 = overlap.norm();
    let phase = if s2 > 0.0 { overlap / s2 } else { ONE };
    let right = Mat2::new(r0[0], r0[1], complement[0] * phase, complement[1] * phase);

    Svd2 {
        left,
        singular_values: [s1, s2],
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_mat, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &Mat2, b: &Mat2, eps: f64) -> bool {
        (*a - *b).frobenius() < eps
    }

    #[test]
    fn identity_and_zero_products() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(0.3, -0.7), c(2.0, 0.0));
        assert_eq!(Mat2::IDENTITY * m, m);
        assert_eq!(m * Mat2::ZERO, Mat2::ZERO);
    }

    #[test]
    fn product_matches_hand_expansion() {
        let a = Mat2::new(c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 2.0));
        let b = Mat2::new(c(0.5, 0.0), c(0.0, 1.0), c(-1.0, 1.0), c(2.0, -2.0));
        // (1+i)(0.5) + 2(−1+i) = −1.5 + 2.5i
        // (1+i)(i) + 2(2−2i) = 3 − 3i
        // (−i)(0.5) + (3+2i)(−1+i) = −5 + 0.5i
        // (−i)(i) + (3+2i)(2−2i) = 11 − 2i
        let expected = Mat2::new(c(-1.5, 2.5), c(3.0, -3.0), c(-5.0, 0.5), c(11.0, -2.0));
        assert!(close(&(a * b), &expected, 1e-14));
    }

    #[test]
    fn adjoint_basics() {
        assert_eq!(Mat2::IDENTITY.adjoint(), Mat2::IDENTITY);
        let m = Mat2::diag(c(0.0, 1.0), C64::from(0.0));
        assert_eq!(m.adjoint(), Mat2::diag(c(0.0, -1.0), C64::from(0.0)));
        let n = Mat2::new(c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0));
        assert_eq!(n.adjoint().adjoint(), n);
    }

    #[test]
    fn det_trace_transpose() {
        assert_eq!(Mat2::IDENTITY.det(), ONE);
        assert_eq!(Mat2::diag(c(2.0, 1.0), c(-3.0, 0.5)).trace(), c(-1.0, 1.5));
        let n = Mat2::new(c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0));
        assert_eq!(n.transpose()[(0, 1)], c(5.0, 6.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (m, n) = (random_mat(&mut rng), random_mat(&mut rng));
            assert!(((m * n).det() - m.det() * n.det()).norm() < 1e-12);
            assert!((m.adjoint().det() - m.det().conj()).norm() < 1e-13);
            assert!(((m + n).trace() - m.trace() - n.trace()).norm() < 1e-14);
        }
    }

    #[test]
    fn herm_eig_diagonal_cases() {
        let e = herm_eig(&Mat2::diag_real(0.9, 0.1)).unwrap();
        assert_eq!(e.values, [0.9, 0.1]);
        assert_eq!(e.vectors, Mat2::IDENTITY);

        let e = herm_eig(&Mat2::diag_real(0.5, 0.5)).unwrap();
        assert_eq!(e.values, [0.5, 0.5]);
        assert_eq!(e.vectors, Mat2::IDENTITY);

        // Ascending diagonal must be reordered.
        let e = herm_eig(&Mat2::diag_real(0.1, 0.9)).unwrap();
        assert_eq!(e.values, [0.9, 0.1]);
        assert!(close(&e.reconstruct(), &Mat2::diag_real(0.1, 0.9), 1e-15));
    }

    #[test]
    fn herm_eig_closed_form_example() {
        let e = herm_eig(&Mat2::real(0.5, 0.2, 0.2, 0.5)).unwrap();
        assert!((e.values[0] - 0.7).abs() < 1e-15);
        assert!((e.values[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let err = herm_eig(&Mat2::real(1.0, 1.0, 0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn svd_simple_cases() {
        let s = svd2(&Mat2::IDENTITY);
        assert_eq!(s.left, Mat2::IDENTITY);
        assert_eq!(s.singular_values, [1.0, 1.0]);
        assert_eq!(s.right, Mat2::IDENTITY);

        let s = svd2(&Mat2::diag_real(2.0, 0.0));
        assert_eq!(s.singular_values, [2.0, 0.0]);
        assert!(s.right.unitarity_defect() < 1e-15);

        let s = svd2(&Mat2::ZERO);
        assert_eq!(s.singular_values, [0.0, 0.0]);
    }

    #[test]
    fn svd_rank_one_and_unitary_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (u, w) = (random_unitary(&mut rng), random_unitary(&mut rng));
            let rank_one = u * Mat2::diag_real(0.7, 0.0) * w;
            let s = svd2(&rank_one);
            assert!(s.singular_values[1] < 1e-15);
            assert!(close(&s.reconstruct(), &rank_one, 1e-14));

            let scaled = u * 0.3;
            let s = svd2(&scaled);
            assert!((s.singular_values[0] - 0.3).abs() < 1e-15);
            assert!((s.singular_values[1] - 0.3).abs() < 1e-15);
            assert!(close(&s.reconstruct(), &scaled, 1e-14));
        }
    }

    #[test]
    fn svd_gauge_is_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s = svd2(&random_mat(&mut rng));
            for j in 0..2 {
                let [c0, c1] = s.left.col(j);
                let pivot = if c1.norm() > c0.norm() { c1 } else { c0 };
                assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
            }
        }
    }
}
