//! 2×2 scattering and transfer matrices.
//!
//! The scattering matrix maps the incoming amplitudes `(a⁺, b⁻)` to the
//! outgoing amplitudes `(b⁺, a⁻)` and is laid out with the transmission
//! amplitudes on the diagonal:
//!
//! ```text
//!     S = | t   r̄ |
//!         | r   t̄ |
//! ```
//!
//! `t`, `r` belong to a wave incident from the left, `t̄`, `r̄` to a wave
//! incident from the right. The transfer matrix maps the amplitudes
//! `(a⁺, a⁻)` left of the scatterer onto `(b⁺, b⁻)` right of it, so a chain
//! of scatterers is a product of transfer matrices read right to left.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{CasimirError, Result};

/// `|t̄|` or `|T₂₂|` below this cannot be inverted meaningfully.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Plain 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl ComplexMat2 {
    pub const IDENTITY: Self = Self::new(ONE, ZERO, ZERO, ONE);

    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m11.conj(),
            self.m21.conj(),
            self.m12.conj(),
            self.m22.conj(),
        )
    }

    /// Inverse by the adjugate formula; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO || !det.is_finite() {
            return None;
        }
        Some(Self::new(
            self.m22 / det,
            -self.m12 / det,
            -self.m21 / det,
            self.m11 / det,
        ))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for ComplexMat2 {
    type Output = ComplexMat2;

    fn mul(self, rhs: Self) -> Self::Output {
        self.matmul(&rhs)
    }
}

/// Free-function form of the matrix product.
pub fn mat2_mul(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat2 {
    a.matmul(b)
}

/// Scattering matrix of a single two-port scatterer at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    /// Transmission, incident from the left.
    pub t: Complex64,
    /// Reflection, incident from the right.
    pub r_bar: Complex64,
    /// Reflection, incident from the left.
    pub r: Complex64,
    /// Transmission, incident from the right.
    pub t_bar: Complex64,
}

impl ScatteringMatrix {
    pub const IDENTITY: Self = Self {
        t: ONE,
        r_bar: ZERO,
        r: ZERO,
        t_bar: ONE,
    };

    pub const fn new(t: Complex64, r_bar: Complex64, r: Complex64, t_bar: Complex64) -> Self {
        Self { t, r_bar, r, t_bar }
    }

    /// Reciprocal and mirror-symmetric scatterer: `t = t̄`, `r = r̄`.
    pub const fn symmetric(t: Complex64, r: Complex64) -> Self {
        Self::new(t, r, r, t)
    }

    /// `r = r̄ = -1`, `t = t̄ = 0`.
    pub const fn perfect_mirror() -> Self {
        Self::symmetric(ZERO, Complex64::new(-1.0, 0.0))
    }

    pub fn as_matrix(&self) -> ComplexMat2 {
        ComplexMat2::new(self.t, self.r_bar, self.r, self.t_bar)
    }

    pub fn from_matrix(m: &ComplexMat2) -> Self {
        Self::new(m.m11, m.m12, m.m21, m.m22)
    }

    pub fn det(&self) -> Complex64 {
        self.t * self.t_bar - self.r * self.r_bar
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(self)
    }

    pub fn to_transfer(&self) -> Result<TransferMatrix> {
        s_to_transfer(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_matrix().max_abs_diff(&other.as_matrix())
    }
}

/// Transfer matrix relating the amplitudes left of a scatterer to those on
/// its right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub ComplexMat2);

impl TransferMatrix {
    pub const IDENTITY: Self = Self(ComplexMat2::IDENTITY);

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.0
    }

    pub fn det(&self) -> Complex64 {
        self.0.det()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().map(Self)
    }

    /// `self` applied after `first`, i.e. the matrix product `self · first`.
    pub fn then_after(&self, first: &Self) -> Self {
        Self(self.0.matmul(&first.0))
    }

    pub fn to_scattering(&self) -> Result<ScatteringMatrix> {
        transfer_to_s(self)
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: Self) -> Self::Output {
        TransferMatrix(self.0 * rhs.0)
    }
}

/// Max-norm of `S†S − 1`.
pub fn unitarity_residual(s: &ScatteringMatrix) -> f64 {
    let m = s.as_matrix();
    m.adjoint().matmul(&m).max_abs_diff(&ComplexMat2::IDENTITY)
}

/// `t t̄ − r r̄`.
pub fn det_s(s: &ScatteringMatrix) -> Complex64 {
    s.det()
}

/// `|det S + r / r̄*|`, which vanishes for unitary `S`. `None` when `r̄ = 0`.
pub fn det_identity_residual(s: &ScatteringMatrix) -> Option<f64> {
    if s.r_bar == ZERO {
        return None;
    }
    Some((s.det() + s.r / s.r_bar.conj()).norm())
}

/// `max |S − S(T(S))|`; `None` when `S` has no transfer matrix.
pub fn round_trip_residual(s: &ScatteringMatrix) -> Option<f64> {
    let back = s_to_transfer(s).and_then(|t| transfer_to_s(&t)).ok()?;
    Some(s.max_abs_diff(&back))
}

/// `T = (1/S₂₂) [[det S, S₁₂], [−S₂₁, 1]]`.
pub fn s_to_transfer(s: &ScatteringMatrix) -> Result<TransferMatrix> {
    let s22 = s.t_bar;
    if s22.norm() < DEGENERATE_THRESHOLD {
        return Err(CasimirError::DegenerateConversion {
            element: "t̄",
            magnitude: s22.norm(),
            threshold: DEGENERATE_THRESHOLD,
        });
    }
    Ok(TransferMatrix(ComplexMat2::new(
        s.det() / s22,
        s.r_bar / s22,
        -s.r / s22,
        ONE / s22,
    )))
}

/// `S = (1/T₂₂) [[det T, T₁₂], [−T₂₁, 1]]`.
pub fn transfer_to_s(t: &TransferMatrix) -> Result<ScatteringMatrix> {
    let m = &t.0;
    if m.m22.norm() < DEGENERATE_THRESHOLD {
        return Err(CasimirError::DegenerateConversion {
            element: "T₂₂",
            magnitude: m.m22.norm(),
            threshold: DEGENERATE_THRESHOLD,
        });
    }
    Ok(ScatteringMatrix::new(
        m.det() / m.m22,
        m.m12 / m.m22,
        -m.m21 / m.m22,
        ONE / m.m22,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn delta_s(g: f64, k: f64) -> ScatteringMatrix {
        let r = c(g, 0.0) / (c(0.0, 2.0 * k) - g);
        ScatteringMatrix::symmetric(ONE + r, r)
    }

    fn propagation(len: f64, k: f64) -> ComplexMat2 {
        let phase = c(0.0, k * len).exp();
        ComplexMat2::diag(phase, phase.inv())
    }

    #[test]
    fn identity_is_neutral_for_mul() {
        let m = ComplexMat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(3.0, 0.0), c(0.0, -1.0));
        assert_eq!(mat2_mul(&ComplexMat2::IDENTITY, &m), m);
        assert_eq!(m * ComplexMat2::IDENTITY, m);
    }

    #[test]
    fn product_with_inverse_is_identity() {
        let m = ComplexMat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(3.0, 0.0), c(0.0, -1.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(&ComplexMat2::IDENTITY) < 1e-15);
        assert!(ComplexMat2::new(ONE, ONE, ONE, ONE).inverse().is_none());
    }

    #[test]
    fn propagation_matrices_compose_additively() {
        let (l1, l2, k) = (0.7, 1.9, 2.3);
        let prod = propagation(l1, k) * propagation(l2, k);
        assert!(prod.max_abs_diff(&propagation(l1 + l2, k)) < 1e-15);
    }

    #[test]
    fn unitarity_residual_examples() {
        assert_eq!(unitarity_residual(&ScatteringMatrix::perfect_mirror()), 0.0);
        for &k in &[0.01, 0.5, 1.0, 7.0, 300.0] {
            assert!(unitarity_residual(&delta_s(2.0, k)) < 1e-12);
        }
        // t = t̄ = 1, r = 1, r̄ = 0: S†S − 1 = [[1, 1], [1, 0]].
        let bad = ScatteringMatrix::new(ONE, ZERO, ONE, ONE);
        assert_eq!(unitarity_residual(&bad), 1.0);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_s(&ScatteringMatrix::IDENTITY), ONE);
        assert!((det_s(&delta_s(2.0, 1.0)) - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(det_s(&ScatteringMatrix::perfect_mirror()), c(-1.0, 0.0));
    }

    #[test]
    fn det_identity_for_unitary_input() {
        let s = delta_s(2.0, 0.37);
        assert!(det_identity_residual(&s).unwrap() < 1e-15);
        assert!(det_identity_residual(&ScatteringMatrix::IDENTITY).is_none());
        // −r̄/r* is the companion form.
        assert!((s.det() + s.r_bar / s.r.conj()).norm() < 1e-15);
    }

    #[test]
    fn conversions_of_identity() {
        assert_eq!(s_to_transfer(&ScatteringMatrix::IDENTITY).unwrap(), TransferMatrix::IDENTITY);
        assert_eq!(transfer_to_s(&TransferMatrix::IDENTITY).unwrap(), ScatteringMatrix::IDENTITY);
    }

    #[test]
    fn delta_round_trip_through_transfer() {
        let s = delta_s(2.0, 1.0);
        let back = transfer_to_s(&s_to_transfer(&s).unwrap()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-12);
        assert!((s_to_transfer(&s).unwrap().det().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_mirror_has_no_transfer_matrix() {
        let err = s_to_transfer(&ScatteringMatrix::perfect_mirror()).unwrap_err();
        assert!(matches!(err, CasimirError::DegenerateConversion { .. }));
        let singular = TransferMatrix(ComplexMat2::diag(ONE, ZERO));
        assert!(transfer_to_s(&singular).is_err());
    }

    #[test]
    fn free_propagation_transfer_gives_pure_phase_transmission() {
        let (len, k) = (1.3, 0.8);
        let s = transfer_to_s(&TransferMatrix(propagation(len, k))).unwrap();
        let phase = c(0.0, k * len).exp();
        assert!((s.t - phase).norm() < 1e-15);
        assert!((s.t_bar - phase).norm() < 1e-15);
        assert_eq!(s.r, ZERO);
        assert_eq!(s.r_bar, ZERO);
    }
}
