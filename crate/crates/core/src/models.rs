//! Parameterized mirror models.
//!
//! Every model is evaluated by closed-form formulas valid on the closed upper
//! half of the complex wavenumber plane, so the imaginary-axis values used by
//! the rotated integrals are exact analytic continuations rather than
//! extrapolations of real-axis data.
//!
//! Units are reduced: `ħ = c = 1`, lengths in one user-chosen unit, couplings
//! in inverse length.
//!
//! # Transmission-line shunt
//!
//! An infinite line of characteristic impedance `Z₀` (unit phase velocity)
//! is shorted at `x = 0` by an inductance `ℓ`. With the `e^{−iωt}` time
//! convention the shunt impedance is `Z_s = −iωℓ = −ikℓ`. The load seen by
//! an incident voltage wave is `Z_s ‖ Z₀`, so
//!
//! ```text
//! r = (Z_s‖Z₀ − Z₀)/(Z_s‖Z₀ + Z₀) = −Z₀/(Z₀ + 2Z_s) = (Z₀/ℓ)/(2ik − Z₀/ℓ)
//! ```
//!
//! which is the point-scatterer form with `g_eff = Z₀/ℓ > 0`. Voltage is
//! continuous across the shunt, giving `t = 1 + r`, and the junction is
//! mirror symmetric.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{CasimirError, Result};
use crate::scattering::{det_identity_residual, round_trip_residual, unitarity_residual, ScatteringMatrix};

/// A denominator below this modulus is treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// Point scatterer `r = g/(2ik − g)`.
    Delta { g: f64 },
    /// `r = −1`, `t = 0` at every wavenumber.
    Perfect,
    /// Frequency-independent reflection; not causal.
    Constant { rho: f64 },
    /// Rectangular barrier of strength `v0` (so `2·v0` enters the wave
    /// equation) and width `a`, centred on the origin.
    Barrier { v0: f64, a: f64 },
    /// Transmission line shorted by an inductance.
    LcShunt { z0: f64, l: f64 },
}

/// A named mirror model with symmetry and causality metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererModel {
    kind: ModelKind,
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CasimirError::InvalidParameter(msg()))
    }
}

impl ScattererModel {
    /// Point scatterer with coupling `g ≥ 0`.
    ///
    /// Negative couplings bind a state at `k = i|g|/2`, which would put a
    /// pole in the upper half-plane, so they are rejected.
    pub fn delta(g: f64) -> Result<Self> {
        require(g.is_finite() && g >= 0.0, || {
            format!("delta coupling must be finite and non-negative, got {g}")
        })?;
        Ok(Self {
            kind: ModelKind::Delta { g },
        })
    }

    pub fn perfect_mirror() -> Self {
        Self {
            kind: ModelKind::Perfect,
        }
    }

    /// Test double with `r = rho` at all wavenumbers, `−1 ≤ rho ≤ 0`.
    pub fn constant_reflectivity(rho: f64) -> Result<Self> {
        require((-1.0..=0.0).contains(&rho), || {
            format!("constant reflectivity must lie in [-1, 0], got {rho}")
        })?;
        Ok(Self {
            kind: ModelKind::Constant { rho },
        })
    }

    pub fn rect_barrier(v0: f64, a: f64) -> Result<Self> {
        require(v0.is_finite() && v0 > 0.0 && a.is_finite() && a > 0.0, || {
            format!("barrier needs v0 > 0 and a > 0, got v0 = {v0}, a = {a}")
        })?;
        Ok(Self {
            kind: ModelKind::Barrier { v0, a },
        })
    }

    pub fn lc_shunt(z0: f64, l: f64) -> Result<Self> {
        require(z0.is_finite() && z0 > 0.0 && l.is_finite() && l > 0.0, || {
            format!("lc shunt needs z0 > 0 and l > 0, got z0 = {z0}, l = {l}")
        })?;
        Ok(Self {
            kind: ModelKind::LcShunt { z0, l },
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Delta { .. } => "delta",
            ModelKind::Perfect => "perfect",
            ModelKind::Constant { .. } => "const",
            ModelKind::Barrier { .. } => "barrier",
            ModelKind::LcShunt { .. } => "lc",
        }
    }

    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match self.kind {
            ModelKind::Delta { g } => vec![("g", g)],
            ModelKind::Perfect => vec![],
            ModelKind::Constant { rho } => vec![("rho", rho)],
            ModelKind::Barrier { v0, a } => vec![("v0", v0), ("a", a)],
            ModelKind::LcShunt { z0, l } => vec![("z0", z0), ("l", l)],
        }
    }

    /// `r = r̄` and `t = t̄` hold exactly.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// No poles of the scattering matrix in the open upper half-plane.
    pub fn is_causal(&self) -> bool {
        !matches!(self.kind, ModelKind::Constant { .. })
    }

    /// Distance from the reference point to the outer edge of the scatterer.
    ///
    /// Amplitudes are referenced to the centre, so on the imaginary axis the
    /// reflection of an extended scatterer may grow like `e^{2κ·half_width}`.
    pub fn half_width(&self) -> f64 {
        match self.kind {
            ModelKind::Barrier { a, .. } => 0.5 * a,
            _ => 0.0,
        }
    }

    /// Effective point-scatterer coupling of the transmission-line shunt.
    pub fn lc_effective_coupling(z0: f64, l: f64) -> f64 {
        z0 / l
    }

    /// Scattering matrix at complex wavenumber `k` with `Im k ≥ 0`.
    pub fn eval(&self, k: Complex64) -> Result<ScatteringMatrix> {
        if !(k.re.is_finite() && k.im.is_finite()) || k.im < 0.0 {
            return Err(CasimirError::EvaluationDomain { re: k.re, im: k.im });
        }
        let (t, r) = match self.kind {
            ModelKind::Delta { g } => {
                let den = 2.0 * I * k - g;
                if g > 0.0 && den.norm() < POLE_THRESHOLD {
                    return Err(self.pole(k));
                }
                let r = if g == 0.0 { Complex64::new(0.0, 0.0) } else { g / den };
                (ONE + r, r)
            }
            ModelKind::Perfect => {
                return Ok(ScatteringMatrix::perfect_mirror());
            }
            ModelKind::Constant { rho } => {
                // Real r with real t is not unitary; t carries the phase −i.
                // Without reflection the phase is free and the identity is used.
                if rho == 0.0 {
                    return Ok(ScatteringMatrix::IDENTITY);
                }
                let t = (1.0 - rho * rho).sqrt();
                (Complex64::new(0.0, -t), Complex64::new(rho, 0.0))
            }
            ModelKind::Barrier { v0, a } => {
                let (t, r) = self.barrier_amplitudes(2.0 * v0, a, k)?;
                let phase = (-I * k * a).exp();
                (t * phase, r * phase)
            }
            ModelKind::LcShunt { z0, l } => {
                let z_shunt = -I * k * l;
                let den = z0 + 2.0 * z_shunt;
                if den.norm() < POLE_THRESHOLD * z0 {
                    return Err(self.pole(k));
                }
                let r = -z0 / den;
                (ONE + r, r)
            }
        };
        Ok(ScatteringMatrix::symmetric(t, r))
    }

    /// Reflection `r e^{2ik·half_width}` seen from the outer edge.
    ///
    /// Bounded by 1 on the positive imaginary axis for passive models, where
    /// the centre-referenced amplitude may overflow.
    pub fn edge_reflection(&self, k: Complex64) -> Result<Complex64> {
        match self.kind {
            ModelKind::Barrier { v0, a } => {
                if !(k.re.is_finite() && k.im.is_finite()) || k.im < 0.0 {
                    return Err(CasimirError::EvaluationDomain { re: k.re, im: k.im });
                }
                Ok(self.barrier_amplitudes(2.0 * v0, a, k)?.1)
            }
            _ => Ok(self.eval(k)?.r),
        }
    }

    /// Convenience for real wavenumbers.
    pub fn eval_real(&self, k: f64) -> Result<ScatteringMatrix> {
        self.eval(Complex64::new(k, 0.0))
    }

    /// Convenience for `k = iκ`.
    pub fn eval_imag(&self, kappa: f64) -> Result<ScatteringMatrix> {
        self.eval(Complex64::new(0.0, kappa))
    }

    fn pole(&self, k: Complex64) -> CasimirError {
        CasimirError::PoleEncountered {
            model: self.to_string(),
            re: k.re,
            im: k.im,
        }
    }

    // With q² = k² − U inside the barrier:
    //   r = U·S e^{−ika} / D,  t = 2ik e^{−ika} / D,
    //   D = (k² + q²)·S + 2ik·C,  C = cos qa,  S = sin(qa)/q.
    // C and S are even in q, so the branch of q is irrelevant. Deep
    // evanescent barriers switch to tan(qa) to avoid overflow.
    // Returns (t, r) without the factor e^{−ika}.
    fn barrier_amplitudes(&self, u: f64, a: f64, k: Complex64) -> Result<(Complex64, Complex64)> {
        let q2 = k * k - u;
        let q = q2.sqrt();
        let qa = q * a;
        let k2q2 = k * k + q2;
        if qa.im.abs() < 20.0 {
            let c = qa.cos();
            let s = sinc_over_q(q, a);
            let den = k2q2 * s + 2.0 * I * k * c;
            if den.norm() < POLE_THRESHOLD {
                return Err(self.pole(k));
            }
            Ok((2.0 * I * k / den, u * s / den))
        } else {
            // Divide numerator and denominator by cos(qa).
            let tan_over_q = robust_tan(qa) / q;
            let sec = if qa.im.abs() > 700.0 { Complex64::new(0.0, 0.0) } else { qa.cos().inv() };
            let den = k2q2 * tan_over_q + 2.0 * I * k;
            if den.norm() < POLE_THRESHOLD {
                return Err(self.pole(k));
            }
            Ok((2.0 * I * k * sec / den, u * tan_over_q / den))
        }
    }
}

/// `n` points spaced evenly in `ln k` from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / (n - 1) as f64;
            (0..n).map(|i| lo * (step * i as f64).exp()).collect()
        }
    }
}

/// Largest consistency residuals of a model over a set of real wavenumbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub model: String,
    pub causal: bool,
    pub points: usize,
    pub unitarity: f64,
    /// `None` when `r̄` vanished at every point.
    pub det_identity: Option<f64>,
    /// `None` when no point had a transfer matrix.
    pub round_trip: Option<f64>,
}

impl ResidualReport {
    pub fn worst(&self) -> f64 {
        [Some(self.unitarity), self.det_identity, self.round_trip]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

impl ScattererModel {
    pub fn residual_report(&self, ks: &[f64]) -> Result<ResidualReport> {
        let mut report = ResidualReport {
            model: self.to_string(),
            causal: self.is_causal(),
            points: ks.len(),
            unitarity: 0.0,
            det_identity: None,
            round_trip: None,
        };
        let worse = |slot: &mut Option<f64>, value: Option<f64>| {
            if let Some(v) = value {
                *slot = Some(slot.map_or(v, |old: f64| old.max(v)));
            }
        };
        for &k in ks {
            let s = self.eval_real(k)?;
            report.unitarity = report.unitarity.max(unitarity_residual(&s));
            worse(&mut report.det_identity, det_identity_residual(&s));
            worse(&mut report.round_trip, round_trip_residual(&s));
        }
        Ok(report)
    }
}

/// `sin(q a)/q`, finite at `q = 0`.
fn sinc_over_q(q: Complex64, a: f64) -> Complex64 {
    let qa = q * a;
    if qa.norm() < 1e-4 {
        let z2 = qa * qa;
        a * (ONE - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        qa.sin() / q
    }
}

/// `tan z` without overflow for large `|Im z|`.
fn robust_tan(z: Complex64) -> Complex64 {
    let (x2, y2) = (2.0 * z.re, 2.0 * z.im);
    let ch = y2.cosh();
    Complex64::new(x2.sin() / ch, y2.tanh()) / (1.0 + x2.cos() / ch)
}

impl fmt::Display for ScattererModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.parameters();
        for (i, (key, value)) in params.iter().enumerate() {
            let sep = if i == 0 { ':' } else { ',' };
            write!(f, "{sep}{key}={value}")?;
        }
        Ok(())
    }
}

impl FromStr for ScattererModel {
    type Err = CasimirError;

    /// Parses `delta:g=<f>`, `perfect`, `const:rho=<f>`,
    /// `barrier:v0=<f>,a=<f>` or `lc:z0=<f>,l=<f>`.
    fn from_str(spec: &str) -> Result<Self> {
        let fail = |reason: String| CasimirError::ModelParse {
            spec: spec.to_string(),
            reason,
        };
        let spec_trim = spec.trim();
        let (name, rest) = match spec_trim.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (spec_trim, None),
        };
        let expected: &[&str] = match name {
            "delta" => &["g"],
            "perfect" => &[],
            "const" => &["rho"],
            "barrier" => &["v0", "a"],
            "lc" => &["z0", "l"],
            other => return Err(fail(format!("unknown model `{other}`"))),
        };

        let mut values: Vec<Option<f64>> = vec![None; expected.len()];
        if let Some(rest) = rest {
            if expected.is_empty() {
                return Err(fail(format!("`{name}` takes no parameters")));
            }
            for item in rest.split(',') {
                let (key, raw) = item
                    .split_once('=')
                    .ok_or_else(|| fail(format!("expected key=value, got `{item}`")))?;
                let slot = expected
                    .iter()
                    .position(|k| *k == key.trim())
                    .ok_or_else(|| fail(format!("unknown parameter `{}`", key.trim())))?;
                if values[slot].is_some() {
                    return Err(fail(format!("parameter `{key}` given twice")));
                }
                let value: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("`{}` is not a number for `{key}`", raw.trim())))?;
                values[slot] = Some(value);
            }
        }
        let mut params = Vec::with_capacity(expected.len());
        for (key, value) in expected.iter().zip(values) {
            params.push(value.ok_or_else(|| fail(format!("missing parameter `{key}`")))?);
        }

        let model = match name {
            "delta" => Self::delta(params[0]),
            "perfect" => Ok(Self::perfect_mirror()),
            "const" => Self::constant_reflectivity(params[0]),
            "barrier" => Self::rect_barrier(params[0], params[1]),
            _ => Self::lc_shunt(params[0], params[1]),
        };
        model.map_err(|e| fail(e.to_string()))
    }
}
