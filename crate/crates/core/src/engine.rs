//! Casimir energy and force between two mirrors.
//!
//! After rotating the wavenumber to `k = ix/2L` the distance-dependent
//! energy and the force become integrals over the round trip
//! `ρ̃(x) = r̄₁ r₂ e^{−x}`:
//!
//! ```text
//! E(L) =  1/(4πL)  ∫₀^∞ ln(1 − ρ̃(x)) dx
//! F(L) = −1/(4πL²) ∫₀^∞ x ρ̃(x)/(1 − ρ̃(x)) dx
//! ```
//!
//! in reduced units `ħ = c = 1`. Passive mirrors satisfy `|ρ̃(x)| ≤ e^{−βx}`
//! with `β = 1` for point scatterers and `β = 1 − (a₁ + a₂)/2L` for barriers
//! of widths `aᵢ`, so the integrals are cut at a finite `X` with an analytic
//! bound on the discarded tail. For perfect mirrors the energy integrand diverges like
//! `ln x` at the origin; adaptive bisection resolves it down to panels of
//! width [`MIN_PANEL_WIDTH`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::cavity::{edge_reflection_product, CavityConfig, RoundTripFactor};
use crate::error::{CasimirError, Result};
use crate::quadrature::{extrapolate_to_zero, gauss_laguerre, integrate, AdaptiveOptions};

/// Smallest panel the adaptive rule will still split.
pub const MIN_PANEL_WIDTH: f64 = 1e-14;

/// Largest Gauss–Laguerre rule; beyond it `e^{x}` at the last node overflows.
pub const MAX_LAGUERRE_NODES: usize = 150;

const ZETA2: f64 = PI * PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    /// Adaptive Gauss–Kronrod bisection on `[0, X]` plus a tail bound.
    Adaptive,
    /// Fixed Gauss–Laguerre rule; the weight `e^{−x}` is factored out.
    GaussLaguerre,
}

/// Accuracy targets and budget for the semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute floor, in the units of the returned quantity.
    pub abs_tol: f64,
    /// Panel budget for [`QuadratureMethod::Adaptive`], node count for
    /// [`QuadratureMethod::GaussLaguerre`].
    pub budget: usize,
    pub method: QuadratureMethod,
    /// Permit contour rotation with non-causal models.
    pub allow_noncausal: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            budget: 2000,
            method: QuadratureMethod::Adaptive,
            allow_noncausal: false,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_method(mut self, method: QuadratureMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn allowing_noncausal(mut self) -> Self {
        self.allow_noncausal = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(CasimirError::InvalidParameter(format!(
                "tolerances must be positive, got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.budget == 0 {
            return Err(CasimirError::InvalidParameter("quadrature budget must be at least 1".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Which evaluation route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Adaptive,
    GaussLaguerre,
    Series,
    RealAxis,
    FiniteDifference,
    ClosedForm,
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodTag::Adaptive => "quad",
            MethodTag::GaussLaguerre => "laguerre",
            MethodTag::Series => "series",
            MethodTag::RealAxis => "real-axis",
            MethodTag::FiniteDifference => "finite-difference",
            MethodTag::ClosedForm => "closed-form",
        })
    }
}

/// Distance-dependent vacuum energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    pub error: f64,
    pub nodes: usize,
    pub method: MethodTag,
}

/// Casimir force; negative values attract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    pub value: f64,
    pub error: f64,
    pub nodes: usize,
    pub method: MethodTag,
}

/// Force from the round-trip series with its resummed tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesForceResult {
    /// Resummed force; `error` covers the term integrals and the tail.
    pub force: ForceResult,
    /// Force from the first `terms` terms alone.
    pub partial: f64,
    /// Estimated contribution of the omitted terms, `force.value − partial`.
    pub tail: f64,
    /// Uncertainty of `tail` on its own.
    pub tail_error: f64,
    pub terms: usize,
}

/// Same as [`SeriesForceResult`] for the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEnergyResult {
    pub energy: EnergyResult,
    pub partial: f64,
    pub tail: f64,
    pub tail_error: f64,
    pub terms: usize,
}

fn check_rotation_allowed(config: &CavityConfig, spec: &QuadratureSpec) -> Result<()> {
    if spec.allow_noncausal {
        return Ok(());
    }
    for model in [&config.model1, &config.model2] {
        if !model.is_causal() {
            return Err(CasimirError::NonCausalModel(model.to_string()));
        }
    }
    Ok(())
}

/// `1 − p e^{−x}` without cancellation when `p → 1`, `x → 0`.
fn one_minus_round_trip(p: f64, x: f64) -> f64 {
    (1.0 - p) - p * (-x).exp_m1()
}

fn ln_one_minus_round_trip(p: f64, x: f64) -> f64 {
    let rho = p * (-x).exp();
    if rho < 0.5 {
        (-rho).ln_1p()
    } else {
        one_minus_round_trip(p, x).ln()
    }
}

/// Smallest `X` (searched in steps of 1/2) with `tail(X) ≤ bound`.
fn cutoff_for(bound: f64, beta: f64, tail: impl Fn(f64) -> f64) -> f64 {
    let mut x = 1.0;
    while tail(x) > bound && beta * x < 745.0 {
        x += 0.5;
    }
    x
}

fn force_tail(x: f64) -> f64 {
    (x + 1.0) * (-x).exp() / -(-x).exp_m1()
}

fn energy_tail(x: f64) -> f64 {
    (-x).exp() / -(-x).exp_m1()
}

/// Rotated integrand evaluation with the first model error remembered.
///
/// Samples the edge product `q`, with `ρ̃(x) = q e^{−βx}`.
struct Sampler<'a> {
    config: &'a CavityConfig,
    failure: RefCell<Option<CasimirError>>,
}

impl<'a> Sampler<'a> {
    fn new(config: &'a CavityConfig) -> Self {
        Self {
            config,
            failure: RefCell::new(None),
        }
    }

    fn reflection(&self, x: f64) -> f64 {
        match edge_reflection_product(self.config, x) {
            Ok(p) => p,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish(self) -> Result<()> {
        match self.failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Which rotated integral to evaluate.
#[derive(Debug, Clone, Copy)]
enum Integrand {
    Energy,
    Force,
}

impl Integrand {
    /// Integrand at `x` for `ρ̃ = q e^{−βx}`.
    fn value(self, q: f64, x: f64, beta: f64) -> f64 {
        let y = beta * x;
        match self {
            Integrand::Energy => ln_one_minus_round_trip(q, y),
            Integrand::Force => {
                let rho = q * (-y).exp();
                if rho == 0.0 {
                    0.0
                } else {
                    x * rho / one_minus_round_trip(q, y)
                }
            }
        }
    }

    /// Integrand divided by `e^{−x}`.
    fn stripped(self, q: f64, x: f64, beta: f64) -> f64 {
        let y = beta * x;
        match self {
            Integrand::Energy => ln_one_minus_round_trip(q, y) * x.exp(),
            Integrand::Force => x * q * ((1.0 - beta) * x).exp() / one_minus_round_trip(q, y),
        }
    }

    /// Bound on `∫_X^∞` of the integrand when `|ρ̃(x)| ≤ e^{−βx}`.
    fn tail(self, x: f64, beta: f64) -> f64 {
        match self {
            Integrand::Energy => energy_tail(beta * x) / beta,
            Integrand::Force => force_tail(beta * x) / (beta * beta),
        }
    }
}

struct RawIntegral {
    value: f64,
    error: f64,
    nodes: usize,
    method: MethodTag,
}

/// `∫₀^∞` of the chosen integrand, tolerances given for the raw integral.
fn rotated_integral(
    config: &CavityConfig,
    spec: &QuadratureSpec,
    kind: Integrand,
    abs_tol: f64,
) -> Result<RawIntegral> {
    let sampler = Sampler::new(config);
    let beta = config.decay_rate();
    let raw = match spec.method {
        QuadratureMethod::Adaptive => {
            let cutoff = cutoff_for(abs_tol / 10.0, beta, |x| kind.tail(x, beta));
            let opts = AdaptiveOptions {
                abs_tol: abs_tol - kind.tail(cutoff, beta),
                rel_tol: spec.rel_tol,
                max_panels: spec.budget,
                min_width: MIN_PANEL_WIDTH,
            };
            let res = integrate(|x| kind.value(sampler.reflection(x), x, beta), 0.0, cutoff, &opts);
            sampler.finish()?;
            let error = res.error + kind.tail(cutoff, beta);
            if !res.converged {
                return Err(CasimirError::ToleranceNotMet {
                    estimate: error,
                    target: abs_tol.max(spec.rel_tol * res.value.abs()),
                    nodes: res.evaluations,
                });
            }
            RawIntegral {
                value: res.value,
                error,
                nodes: res.evaluations,
                method: MethodTag::Adaptive,
            }
        }
        QuadratureMethod::GaussLaguerre => {
            let n = spec.budget.clamp(2, MAX_LAGUERRE_NODES);
            let rule = |m: usize| -> f64 {
                let (nodes, weights) = gauss_laguerre(m);
                nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&x, &w)| w * kind.stripped(sampler.reflection(x), x, beta))
                    .sum()
            };
            let fine = rule(n);
            let coarse = rule(n / 2);
            sampler.finish()?;
            let error = (fine - coarse).abs();
            let target = abs_tol.max(spec.rel_tol * fine.abs());
            if error.is_nan() || error > target {
                return Err(CasimirError::ToleranceNotMet {
                    estimate: error,
                    target,
                    nodes: n + n / 2,
                });
            }
            RawIntegral {
                value: fine,
                error,
                nodes: n + n / 2,
                method: MethodTag::GaussLaguerre,
            }
        }
    };
    Ok(raw)
}

/// Distance-dependent vacuum energy from the rotated integral.
pub fn casimir_energy(config: &CavityConfig, spec: &QuadratureSpec) -> Result<EnergyResult> {
    spec.validate()?;
    check_rotation_allowed(config, spec)?;
    let scale = 1.0 / (4.0 * PI * config.distance());
    let raw = rotated_integral(config, spec, Integrand::Energy, spec.abs_tol / scale)?;
    Ok(EnergyResult {
        value: raw.value * scale,
        error: raw.error * scale,
        nodes: raw.nodes,
        method: raw.method,
    })
}

/// Casimir force from the rotated integral.
pub fn casimir_force(config: &CavityConfig, spec: &QuadratureSpec) -> Result<ForceResult> {
    spec.validate()?;
    check_rotation_allowed(config, spec)?;
    let l = config.distance();
    let scale = 1.0 / (4.0 * PI * l * l);
    let raw = rotated_integral(config, spec, Integrand::Force, spec.abs_tol / scale)?;
    Ok(ForceResult {
        value: -raw.value * scale,
        error: raw.error * scale,
        nodes: raw.nodes,
        method: raw.method,
    })
}

/// Energy from the original real-axis form
/// `(1/2π) Im ∫₀^{k_max} ln(1 − r̄₁ r₂ e^{2ikL}) dk`.
///
/// The integrand oscillates with period `π/L` and decays only as fast as the
/// mirrors become transparent, so this is a cross-check that approaches
/// [`casimir_energy`] as `k_max` grows. The truncation beyond `k_max` is not
/// part of the reported error. For perfect mirrors the principal logarithm
/// turns the integrand into a sawtooth that never decays; no convergence is
/// claimed in that case.
pub fn casimir_energy_real_axis(
    config: &CavityConfig,
    k_max: f64,
    spec: &QuadratureSpec,
) -> Result<EnergyResult> {
    spec.validate()?;
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(CasimirError::InvalidParameter(format!("k_max must be positive, got {k_max}")));
    }
    let failure = RefCell::new(None);
    let integrand = |k: f64| -> f64 {
        let kc = Complex64::new(k, 0.0);
        let amplitudes = config.model1.eval(kc).and_then(|s1| Ok((s1, config.model2.eval(kc)?)));
        match amplitudes {
            Ok((s1, s2)) => {
                let rho = RoundTripFactor::new(&s1, &s2, config.distance(), kc).value();
                (Complex64::new(1.0, 0.0) - rho).arg()
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let scale = 1.0 / (2.0 * PI);
    let opts = AdaptiveOptions {
        abs_tol: spec.abs_tol / scale,
        rel_tol: spec.rel_tol,
        max_panels: spec.budget,
        min_width: MIN_PANEL_WIDTH,
    };
    let res = integrate(integrand, 0.0, k_max, &opts);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(CasimirError::ToleranceNotMet {
            estimate: res.error * scale,
            target: spec.target(res.value * scale),
            nodes: res.evaluations,
        });
    }
    Ok(EnergyResult {
        value: res.value * scale,
        error: res.error * scale,
        nodes: res.evaluations,
        method: MethodTag::RealAxis,
    })
}

/// Smallest partial-sum length used for extrapolation.
const MIN_EXTRAPOLATION_TERMS: usize = 4;
const MAX_EXTRAPOLATION_LEVELS: usize = 10;

struct SeriesSum {
    resummed: f64,
    partial: f64,
    tail: f64,
    tail_error: f64,
    quad_error: f64,
    nodes: usize,
}

/// Sums `Σₙ cₙ`, `cₙ = ∫₀^∞ m(x) ρ̃(x)ⁿ dx` with `m(x) = x` (force) or
/// `m(x) = 1/n` (energy), for `n = 1..=n_max`.
///
/// With `x = u/n` every term becomes `n⁻² ∫ m̂(u) q(u/n)ⁿ e^{−βu} du`,
/// a smooth integral on a fixed scale. The terms fall off as `1/n²`
/// because `|r̄₁r₂| → 1` at `x = 0` for most mirrors, so the partial sums
/// `S_N` behave like `S − c₁/N + c₂/N² − …`; polynomial extrapolation of
/// `S_{N}, S_{N/2}, S_{N/4}, …` in `1/N` resums the tail.
fn round_trip_series(
    config: &CavityConfig,
    n_max: usize,
    spec: &QuadratureSpec,
    kind: Integrand,
    abs_tol: f64,
) -> Result<SeriesSum> {
    if n_max == 0 {
        return Err(CasimirError::InvalidParameter("series needs at least one term".into()));
    }
    let sampler = Sampler::new(config);
    let beta = config.decay_rate();
    // Every term is bounded by n⁻² ∫ m̂(u) e^{−βu} du; share the tail budget.
    let term_tail = |u: f64| ZETA2 * kind.tail(u, beta);
    let cutoff = cutoff_for(abs_tol / 10.0, beta, term_tail);
    let opts = AdaptiveOptions {
        abs_tol: (abs_tol - term_tail(cutoff)) / ZETA2,
        rel_tol: spec.rel_tol,
        max_panels: spec.budget,
        min_width: MIN_PANEL_WIDTH,
    };

    let mut partial_sums = Vec::with_capacity(n_max);
    let mut running = 0.0;
    let mut quad_error = 0.0;
    let mut nodes = 0;
    for n in 1..=n_max {
        let nf = n as f64;
        let power = n as i32;
        let integrand = |u: f64| -> f64 {
            let q = sampler.reflection(u / nf);
            let weight = match kind {
                Integrand::Force => u,
                Integrand::Energy => 1.0,
            };
            if q == 0.0 {
                0.0
            } else {
                weight * q.powi(power) * (-beta * u).exp()
            }
        };
        let res = integrate(integrand, 0.0, cutoff, &opts);
        if let Some(e) = sampler.failure.borrow_mut().take() {
            return Err(e);
        }
        nodes += res.evaluations;
        if !res.converged {
            return Err(CasimirError::ToleranceNotMet {
                estimate: res.error / (nf * nf),
                target: opts.abs_tol.max(opts.rel_tol * res.value.abs()) / (nf * nf),
                nodes,
            });
        }
        let sign = match kind {
            Integrand::Force => 1.0,
            Integrand::Energy => -1.0,
        };
        running += sign * res.value / (nf * nf);
        quad_error += res.error / (nf * nf);
        partial_sums.push(running);
    }
    quad_error += term_tail(cutoff);

    let partial = running;
    let mut levels = Vec::new();
    let mut n = n_max;
    while n >= MIN_EXTRAPOLATION_TERMS && levels.len() < MAX_EXTRAPOLATION_LEVELS {
        levels.push(n);
        n /= 2;
    }
    let (resummed, tail_error) = if levels.len() >= 3 {
        levels.reverse();
        let steps: Vec<f64> = levels.iter().map(|&n| 1.0 / n as f64).collect();
        let values: Vec<f64> = levels.iter().map(|&n| partial_sums[n - 1]).collect();
        extrapolate_to_zero(&steps, &values)
    } else {
        // Rigorous: |ρ̃| ≤ e^{−βx} bounds the omitted terms by Σ 1/(βn)².
        let bound = match kind {
            Integrand::Force => 1.0 / (beta * beta),
            Integrand::Energy => 1.0 / beta,
        };
        (partial, bound / n_max as f64)
    };
    Ok(SeriesSum {
        resummed,
        partial,
        tail: resummed - partial,
        tail_error,
        quad_error,
        nodes,
    })
}

/// Force from the geometric expansion `ρ̃/(1 − ρ̃) = Σ ρ̃ⁿ`, term by term.
pub fn casimir_force_series(
    config: &CavityConfig,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<SeriesForceResult> {
    spec.validate()?;
    check_rotation_allowed(config, spec)?;
    let l = config.distance();
    let scale = 1.0 / (4.0 * PI * l * l);
    let sum = round_trip_series(config, n_max, spec, Integrand::Force, spec.abs_tol / scale)?;
    Ok(SeriesForceResult {
        force: ForceResult {
            value: -sum.resummed * scale,
            error: (sum.quad_error + sum.tail_error) * scale,
            nodes: sum.nodes,
            method: MethodTag::Series,
        },
        partial: -sum.partial * scale,
        tail: -sum.tail * scale,
        tail_error: sum.tail_error * scale,
        terms: n_max,
    })
}

/// Energy from `ln(1 − ρ̃) = −Σ ρ̃ⁿ/n`, term by term.
pub fn casimir_energy_series(
    config: &CavityConfig,
    n_max: usize,
    spec: &QuadratureSpec,
) -> Result<SeriesEnergyResult> {
    spec.validate()?;
    check_rotation_allowed(config, spec)?;
    let scale = 1.0 / (4.0 * PI * config.distance());
    let sum = round_trip_series(config, n_max, spec, Integrand::Energy, spec.abs_tol / scale)?;
    Ok(SeriesEnergyResult {
        energy: EnergyResult {
            value: sum.resummed * scale,
            error: (sum.quad_error + sum.tail_error) * scale,
            nodes: sum.nodes,
            method: MethodTag::Series,
        },
        partial: sum.partial * scale,
        tail: sum.tail * scale,
        tail_error: sum.tail_error * scale,
        terms: n_max,
    })
}

/// `−π/(24L²)`, the force between perfect mirrors.
pub fn perfect_mirror_force(distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(CasimirError::InvalidParameter(format!("distance must be positive, got {distance}")));
    }
    Ok(-PI / (24.0 * distance * distance))
}

/// Magnitude `π² A / (240 L⁴)` of the attractive force between ideal plates
/// in three dimensions, reduced units.
pub fn ideal_force_3d(area: f64, distance: f64) -> Result<f64> {
    if !(area > 0.0 && distance > 0.0 && area.is_finite() && distance.is_finite()) {
        return Err(CasimirError::InvalidParameter(format!(
            "area and distance must be positive, got A = {area}, L = {distance}"
        )));
    }
    Ok(PI * PI * area / (240.0 * distance.powi(4)))
}

/// `−[E(L+h) − E(L−h)]/(2h)` from [`casimir_energy`], `0 < h < L/10`.
///
/// The reported error propagates the two energy errors only; the `O(h²)`
/// truncation of the difference quotient is not included.
pub fn force_from_energy_fd(config: &CavityConfig, h: f64, spec: &QuadratureSpec) -> Result<ForceResult> {
    let l = config.distance();
    if !(h > 0.0 && h < l / 10.0) {
        return Err(CasimirError::InvalidParameter(format!(
            "finite-difference step must satisfy 0 < h < L/10 = {}, got {h}",
            l / 10.0
        )));
    }
    let plus = casimir_energy(&config.with_distance(l + h)?, spec)?;
    let minus = casimir_energy(&config.with_distance(l - h)?, spec)?;
    Ok(ForceResult {
        value: -(plus.value - minus.value) / (2.0 * h),
        error: (plus.error + minus.error) / (2.0 * h),
        nodes: plus.nodes + minus.nodes,
        method: MethodTag::FiniteDifference,
    })
}
