//! Mode-sum oracle: the Casimir energy as a sum of zero-point shifts of the
//! modes of a large periodic box.
//!
//! In a box of length `ℒ` the free modes sit at `k_n = 2πn/ℒ`, two per `n`.
//! Inserting a scatterer shifts the pair by amounts whose sum is
//! `(i/ℒ) ln det S = −φ/ℒ`, with `φ` the phase of `det S`. Half the shifted
//! wavenumbers summed over all modes, under a smooth cutoff, gives the energy
//! shift of the box. Between two cavity lengths the cutoff-dependent
//! self-energies of the mirrors cancel and the difference converges to the
//! contour-integral result as `ℒ` grows.
//!
//! Two errors remain: the finite mode spacing, falling like `ℒ⁻²`, and the
//! smooth cutoff, falling like `k_max⁻⁴`. At fixed `k_max` the second one
//! eventually dominates, so the default cutoff grows like `√ℒ` and both
//! errors fall together.
//!
//! The phase is split as `φ = arg(det S₁ det S₂) − 2 Arg(1 − ρ)`. The mirror
//! part is unwrapped continuously in `k`; the cavity part is kept on the
//! principal branch, which counts every resonance the cavity supports. For
//! partial mirrors this is the same as unwrapping `det S` itself; for perfect
//! mirrors it is the only choice that sees the cavity modes at all.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cavity::{CavityConfig, RoundTripFactor};
use crate::engine::{casimir_energy, QuadratureSpec};
use crate::error::{CasimirError, Result};
use crate::models::ScattererModel;
use crate::scattering::ScatteringMatrix;

/// `||det S| − 1|` tolerated by [`wavenumber_shift_total`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Largest phase step between neighbouring samples.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;

/// Smallest box, in units of the cavity length.
pub const MIN_BOX_RATIO: f64 = 50.0;

/// Cutoff weight falls below `1e-17` past this multiple of `k_max`.
const CUTOFF_REACH: f64 = 2.5;

/// Periodic box and the sampling of its modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSpec {
    /// Box length `ℒ`.
    pub length: f64,
    /// Scale of the cutoff `w(k) = exp(−(k/k_max)⁴)`.
    pub k_max: f64,
    /// Phase samples per mode spacing.
    pub resolution: usize,
}

impl BoxSpec {
    /// Cutoff of the default box at [`BoxSpec::REFERENCE_LENGTH`].
    pub const DEFAULT_K_MAX: f64 = 40.0;
    pub const REFERENCE_LENGTH: f64 = 500.0;
    pub const DEFAULT_RESOLUTION: usize = 8;

    pub fn new(length: f64, k_max: f64, resolution: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(CasimirError::InvalidParameter(format!("box length must be positive, got {length}")));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(CasimirError::InvalidParameter(format!("cutoff must be positive, got {k_max}")));
        }
        if resolution == 0 {
            return Err(CasimirError::InvalidParameter("resolution must be at least 1".into()));
        }
        Ok(Self {
            length,
            k_max,
            resolution,
        })
    }

    /// Box of the given length with the default resolution and the cutoff
    /// `DEFAULT_K_MAX·√(ℒ/REFERENCE_LENGTH)`.
    pub fn with_length(length: f64) -> Result<Self> {
        Self::new(length, Self::default_k_max(length), Self::DEFAULT_RESOLUTION)
    }

    pub fn default_k_max(length: f64) -> f64 {
        Self::DEFAULT_K_MAX * (length / Self::REFERENCE_LENGTH).sqrt()
    }

    pub fn cutoff_weight(&self, k: f64) -> f64 {
        (-(k / self.k_max).powi(4)).exp()
    }

    /// Sample points `(n + (j + ½)/res)·2π/ℒ` up to where the cutoff vanishes.
    fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        let h = 2.0 * PI / (self.length * self.resolution as f64);
        let count = (CUTOFF_REACH * self.k_max / h).ceil() as usize;
        (0..count).map(move |i| (i as f64 + 0.5) * h)
    }
}

/// Eigenvalues of the S-matrix; the phase `φ` of `det S` is the sum of
/// their phases.
pub fn eigen_branches(s: &ScatteringMatrix) -> [Complex64; 2] {
    let half_trace = (s.t + s.t_bar) * 0.5;
    let disc = (half_trace * half_trace - s.det()).sqrt();
    [half_trace + disc, half_trace - disc]
}

/// Sum of the shifts of one mode pair, `(i/ℒ) ln det S = −arg(det S)/ℒ`,
/// principal branch.
pub fn wavenumber_shift_total(s: &ScatteringMatrix, box_length: f64) -> Result<f64> {
    if !(box_length.is_finite() && box_length > 0.0) {
        return Err(CasimirError::InvalidParameter(format!("box length must be positive, got {box_length}")));
    }
    let det = s.det();
    let deviation = (det.norm() - 1.0).abs();
    if deviation.is_nan() || deviation > UNITARITY_TOLERANCE {
        return Err(CasimirError::NonUnitaryInput(deviation));
    }
    Ok(-det.arg() / box_length)
}

fn wrap_phase(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// Energy shift of the box with the cavity inside,
/// `½ Σ_modes w(k) δk` with every mode's shift averaged over its cell.
pub fn mode_sum_energy_shift(config: &CavityConfig, box_spec: &BoxSpec) -> Result<f64> {
    if box_spec.length < MIN_BOX_RATIO * config.distance() {
        return Err(CasimirError::InvalidParameter(format!(
            "box length {} must be at least {MIN_BOX_RATIO} times the cavity length {}",
            box_spec.length,
            config.distance()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut previous: Option<(f64, f64)> = None;
    let mut weighted_phase = 0.0;
    for k in box_spec.samples() {
        let kc = Complex64::new(k, 0.0);
        let s1 = config.model1.eval(kc)?;
        let s2 = config.model2.eval(kc)?;
        let principal = (s1.det() * s2.det()).arg();
        let mirror_phase = match previous {
            None => principal,
            Some((last_principal, last_phase)) => {
                let step = wrap_phase(principal - last_principal);
                if step.abs() > MAX_PHASE_STEP {
                    return Err(CasimirError::CutoffTooCoarse { k, jump: step });
                }
                last_phase + step
            }
        };
        previous = Some((principal, mirror_phase));
        let rho = RoundTripFactor::new(&s1, &s2, config.distance(), kc).value();
        let phase = mirror_phase - 2.0 * (one - rho).arg();
        weighted_phase += box_spec.cutoff_weight(k) * phase;
    }
    Ok(-weighted_phase / (2.0 * box_spec.length * box_spec.resolution as f64))
}

/// `E(L_a) − E(L_b)` from two mode sums in the same box.
pub fn energy_difference_oracle(
    model1: ScattererModel,
    model2: ScattererModel,
    distance_a: f64,
    distance_b: f64,
    box_spec: &BoxSpec,
) -> Result<f64> {
    let a = mode_sum_energy_shift(&CavityConfig::new(model1, model2, distance_a)?, box_spec)?;
    let b = mode_sum_energy_shift(&CavityConfig::new(model1, model2, distance_b)?, box_spec)?;
    Ok(a - b)
}

/// One box length of an oracle convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub box_length: f64,
    pub oracle: f64,
    /// Same difference from the contour integral.
    pub integral: f64,
    /// `|oracle − integral|/|integral|`, or the absolute deviation when the
    /// integral vanishes.
    pub deviation: f64,
}

/// Mode-sum energy differences over a list of box lengths, each compared
/// with the contour-integral difference. Without an explicit `k_max` every
/// box uses [`BoxSpec::default_k_max`].
pub fn oracle_convergence(
    model1: ScattererModel,
    model2: ScattererModel,
    distance_a: f64,
    distance_b: f64,
    box_lengths: &[f64],
    k_max: Option<f64>,
    resolution: usize,
) -> Result<Vec<OracleRow>> {
    let spec = QuadratureSpec::default();
    let ea = casimir_energy(&CavityConfig::new(model1, model2, distance_a)?, &spec)?.value;
    let eb = casimir_energy(&CavityConfig::new(model1, model2, distance_b)?, &spec)?.value;
    let integral = ea - eb;
    box_lengths
        .iter()
        .map(|&length| {
            let cutoff = k_max.unwrap_or_else(|| BoxSpec::default_k_max(length));
            let box_spec = BoxSpec::new(length, cutoff, resolution)?;
            let oracle = energy_difference_oracle(model1, model2, distance_a, distance_b, &box_spec)?;
            let deviation = if integral == 0.0 {
                (oracle - integral).abs()
            } else {
                ((oracle - integral) / integral).abs()
            };
            Ok(OracleRow {
                box_length: length,
                oracle,
                integral,
                deviation,
            })
        })
        .collect()
}
