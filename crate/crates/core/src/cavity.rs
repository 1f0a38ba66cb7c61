//! Two mirrors and the free propagation between them.
//!
//! Mirror 1 sits on the left, mirror 2 a distance `L` to its right. Only the
//! inner reflection amplitudes `r̄₁` and `r₂` meet in the cavity, so the
//! distance dependence of every quantity here enters through the round-trip
//! factor `ρ(k) = r̄₁(k) r₂(k) e^{2ikL}`.
//!
//! The full cavity transfer matrix is `T_L⁻¹ T₂ T_L T₁`. The trailing
//! `T_L⁻¹` keeps the total length of a surrounding box fixed when the cavity
//! is inserted; it multiplies the diagonal of the composite by pure phases
//! and leaves the distance-dependent factor of `det S` untouched, which is
//! visible in the factorized determinant
//! `det S = det S₁ det S₂ (1 − ρ*)/(1 − ρ)`.

use num_complex::Complex64;

use crate::error::{CasimirError, Result};
use crate::models::ScattererModel;
use crate::scattering::{s_to_transfer, transfer_to_s, ComplexMat2, ScatteringMatrix, TransferMatrix};

/// `|1 − ρ|` below this is a resonance.
pub const RESONANCE_THRESHOLD: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two mirrors a positive distance apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    pub model1: ScattererModel,
    pub model2: ScattererModel,
    distance: f64,
}

impl CavityConfig {
    pub fn new(model1: ScattererModel, model2: ScattererModel, distance: f64) -> Result<Self> {
        if !(distance.is_finite() && distance > 0.0) {
            return Err(CasimirError::InvalidParameter(format!(
                "mirror separation must be positive, got {distance}"
            )));
        }
        let reach = model1.half_width() + model2.half_width();
        if distance <= reach {
            return Err(CasimirError::InvalidParameter(format!(
                "scatterers overlap: separation {distance} does not exceed the summed half widths {reach}"
            )));
        }
        Ok(Self {
            model1,
            model2,
            distance,
        })
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Same mirrors at another separation.
    pub fn with_distance(&self, distance: f64) -> Result<Self> {
        Self::new(self.model1, self.model2, distance)
    }

    /// `β` with `|ρ̃(x)| ≤ e^{−βx}`: one for point mirrors, smaller when the
    /// scatterers have width.
    pub fn decay_rate(&self) -> f64 {
        1.0 - (self.model1.half_width() + self.model2.half_width()) / self.distance
    }

    pub fn is_causal(&self) -> bool {
        self.model1.is_causal() && self.model2.is_causal()
    }

    pub fn round_trip_factor(&self, k: Complex64) -> Result<RoundTripFactor> {
        let s1 = self.model1.eval(k)?;
        let s2 = self.model2.eval(k)?;
        Ok(RoundTripFactor::new(&s1, &s2, self.distance, k))
    }
}

/// `ρ = r̄₁ r₂ e^{2ikL}` at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripFactor(pub Complex64);

impl RoundTripFactor {
    pub fn new(s1: &ScatteringMatrix, s2: &ScatteringMatrix, distance: f64, k: Complex64) -> Self {
        Self(s1.r_bar * s2.r * (2.0 * I * k * distance).exp())
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// `(1 − ρ*)/(1 − ρ)`; a pure phase at real `k`.
    pub fn phase_factor(&self) -> Result<Complex64> {
        let den = self.resonance_checked_denominator()?;
        Ok((ONE - self.0.conj()) / den)
    }

    fn resonance_checked_denominator(&self) -> Result<Complex64> {
        let den = ONE - self.0;
        if den.norm() < RESONANCE_THRESHOLD {
            return Err(CasimirError::CavityResonance {
                distance: den.norm(),
            });
        }
        Ok(den)
    }
}

/// `diag(e^{ikL}, e^{−ikL})`. A negative length gives the inverse.
pub fn free_propagation(distance: f64, k: Complex64) -> TransferMatrix {
    let phase = (I * k * distance).exp();
    TransferMatrix(ComplexMat2::diag(phase, (-I * k * distance).exp()))
}

/// Closed-form composite of `s1` followed directly by `s2`, all multiple
/// reflections summed.
pub fn compose_adjacent(s1: &ScatteringMatrix, s2: &ScatteringMatrix) -> Result<ScatteringMatrix> {
    let den = ONE - s1.r_bar * s2.r;
    if den.norm() < RESONANCE_THRESHOLD {
        return Err(CasimirError::CavityResonance {
            distance: den.norm(),
        });
    }
    Ok(ScatteringMatrix::new(
        s1.t * s2.t / den,
        s2.r_bar + s1.r_bar * s2.t * s2.t_bar / den,
        s1.r + s2.r * s1.t * s1.t_bar / den,
        s1.t_bar * s2.t_bar / den,
    ))
}

/// Same composite as [`compose_adjacent`], by multiplying transfer matrices.
pub fn compose_via_transfer(s1: &ScatteringMatrix, s2: &ScatteringMatrix) -> Result<ScatteringMatrix> {
    let t1 = s_to_transfer(s1)?;
    let t2 = s_to_transfer(s2)?;
    transfer_to_s(&(t2 * t1))
}

/// Composite scattering matrix of the cavity from the product
/// `T_L⁻¹ T₂ T_L T₁`. Both mirrors must transmit at `k`.
pub fn cavity_smatrix(config: &CavityConfig, k: Complex64) -> Result<ScatteringMatrix> {
    let s1 = config.model1.eval(k)?;
    let s2 = config.model2.eval(k)?;
    RoundTripFactor::new(&s1, &s2, config.distance, k).resonance_checked_denominator()?;
    let t1 = s_to_transfer(&s1)?;
    let t2 = s_to_transfer(&s2)?;
    let prop = free_propagation(config.distance, k);
    let back = free_propagation(-config.distance, k);
    transfer_to_s(&(back * t2 * prop * t1))
}

/// `det S = [det S₁ det S₂ − r₁ r̄₂ e^{−2ikL}] / [1 − r̄₁ r₂ e^{2ikL}]`.
///
/// Evaluated directly from the amplitudes, so it stays well defined for
/// perfect mirrors, which have no transfer matrix.
pub fn cavity_det_s(config: &CavityConfig, k: Complex64) -> Result<Complex64> {
    let s1 = config.model1.eval(k)?;
    let s2 = config.model2.eval(k)?;
    let rho = RoundTripFactor::new(&s1, &s2, config.distance, k);
    let den = rho.resonance_checked_denominator()?;
    let back = s1.r * s2.r_bar * (-2.0 * I * k * config.distance).exp();
    Ok((s1.det() * s2.det() - back) / den)
}

/// `det S₂ det S₁ (1 − ρ*)/(1 − ρ)`; only meaningful at real `k`.
pub fn cavity_det_factorized(config: &CavityConfig, k: f64) -> Result<Complex64> {
    let kc = Complex64::new(k, 0.0);
    let s1 = config.model1.eval(kc)?;
    let s2 = config.model2.eval(kc)?;
    let rho = RoundTripFactor::new(&s1, &s2, config.distance, kc);
    Ok(s2.det() * s1.det() * rho.phase_factor()?)
}

/// Product of the inner reflections `r̄₁ r₂` at `k = ix/2L`.
///
/// Real for the built-in models; the imaginary part is discarded.
pub fn inner_reflection_product(config: &CavityConfig, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(CasimirError::InvalidParameter(format!(
            "rotated variable must be non-negative, got {x}"
        )));
    }
    let kappa = x / (2.0 * config.distance);
    let r1 = config.model1.eval_imag(kappa)?.r_bar;
    let r2 = config.model2.eval_imag(kappa)?.r;
    Ok((r1 * r2).re)
}

/// Product of the edge reflections at `k = ix/2L`, so that
/// `ρ̃(x) = q(x) e^{−βx}` with `β` the [`CavityConfig::decay_rate`].
pub fn edge_reflection_product(config: &CavityConfig, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(CasimirError::InvalidParameter(format!(
            "rotated variable must be non-negative, got {x}"
        )));
    }
    let k = Complex64::new(0.0, x / (2.0 * config.distance));
    let r1 = config.model1.edge_reflection(k)?;
    let r2 = config.model2.edge_reflection(k)?;
    Ok((r1 * r2).re)
}

/// Round trip on the imaginary axis, `ρ̃(x) = r̄₁ r₂ e^{−x}` at `k = ix/2L`.
pub fn round_trip(config: &CavityConfig, x: f64) -> Result<f64> {
    Ok(edge_reflection_product(config, x)? * (-config.decay_rate() * x).exp())
}

/// Composite of `s1` and `s2` with every `1/(1 − r̄₁r₂)` replaced by the
/// geometric series truncated after `n` extra round trips.
pub fn round_trip_expansion(s1: &ScatteringMatrix, s2: &ScatteringMatrix, n: usize) -> ScatteringMatrix {
    let x = s1.r_bar * s2.r;
    let mut sum = ONE;
    let mut power = ONE;
    for _ in 0..n {
        power *= x;
        sum += power;
    }
    ScatteringMatrix::new(
        s1.t * s2.t * sum,
        s2.r_bar + s1.r_bar * s2.t * s2.t_bar * sum,
        s1.r + s2.r * s1.t * s1.t_bar * sum,
        s1.t_bar * s2.t_bar * sum,
    )
}

/// `|r̄₁r₂|^{n+1}/(1 − |r̄₁r₂|)`: bound on each entry of the difference
/// between [`round_trip_expansion`] and [`compose_adjacent`] for passive
/// mirrors. Infinite when `|r̄₁r₂| ≥ 1`.
pub fn expansion_tail_bound(s1: &ScatteringMatrix, s2: &ScatteringMatrix, n: usize) -> f64 {
    let x = (s1.r_bar * s2.r).norm();
    if x >= 1.0 {
        return f64::INFINITY;
    }
    x.powi(n as i32 + 1) / (1.0 - x)
}
