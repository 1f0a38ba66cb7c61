//! Quadrature and extrapolation primitives.
//!
//! * 21-point Gauss–Kronrod panels with the QUADPACK error heuristic,
//!   refined adaptively by bisecting the worst panel;
//! * Gauss–Laguerre rules for `∫₀^∞ e^{−x} f(x) dx`;
//! * polynomial extrapolation of a sequence to step size zero.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208067391790,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Weights of the embedded 10-point Gauss rule (odd-indexed XGK nodes).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One Gauss–Kronrod panel.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub error: f64,
}

/// 21-point Kronrod estimate on `[a, b]` with the QUADPACK error estimate.
pub fn gauss_kronrod_21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Panel budget.
    pub max_panels: usize,
    /// Panels narrower than this are never split.
    pub min_width: f64,
}

struct Queued {
    panel: Panel,
    seq: usize,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    // Largest error first; earlier panels win ties so the order is fixed.
    fn cmp(&self, other: &Self) -> Ordering {
        self.panel
            .error
            .total_cmp(&other.panel.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Globally adaptive bisection on `[a, b]`.
///
/// Stops once the summed panel error is below
/// `max(abs_tol, rel_tol·|value|)`, or when the panel budget is spent
/// (`converged == false`).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Integral {
    let first = gauss_kronrod_21(&mut f, a, b);
    let mut evaluations = 21;
    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut value = first.value;
    let mut error = first.error;
    heap.push(Queued { panel: first, seq });
    let mut panels = 1;

    let target = |v: f64| opts.abs_tol.max(opts.rel_tol * v.abs());
    while error > target(value) && panels < opts.max_panels {
        let Some(Queued { panel, .. }) = heap.pop() else {
            break;
        };
        if panel.b - panel.a < 2.0 * opts.min_width {
            frozen_value += panel.value;
            frozen_error += panel.error;
            continue;
        }
        let mid = 0.5 * (panel.a + panel.b);
        let left = gauss_kronrod_21(&mut f, panel.a, mid);
        let right = gauss_kronrod_21(&mut f, mid, panel.b);
        evaluations += 42;
        panels += 1;
        for child in [left, right] {
            seq += 1;
            heap.push(Queued { panel: child, seq });
        }
        // Re-sum instead of updating incrementally so rounding does not drift.
        let (v, e) = heap
            .iter()
            .fold((frozen_value, frozen_error), |(v, e), q| (v + q.panel.value, e + q.panel.error));
        value = v;
        error = e;
    }
    Integral {
        value,
        error,
        evaluations,
        panels,
        converged: error <= target(value),
    }
}

/// Nodes and weights of the `n`-point Gauss–Laguerre rule,
/// `∫₀^∞ e^{−x} f(x) dx ≈ Σ wᵢ f(xᵢ)`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Laguerre rule needs at least one node");
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n {
        // Initial guesses for the i-th root of Lₙ.
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut derivative = 0.0;
        let mut previous = 0.0;
        for _ in 0..100 {
            // Three-term recurrence for Lₙ(z) and Lₙ₋₁(z).
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            derivative = nf * (p1 - p2) / z;
            previous = p2;
            let step = p1 / derivative;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = -1.0 / (derivative * nf * previous);
    }
    (nodes, weights)
}

/// Extrapolates `values[i] ≈ V(h[i])` to `h = 0` with Neville's scheme.
///
/// Returns the extrapolated value and the size of the last correction as an
/// error estimate. `steps` should decrease towards zero.
pub fn extrapolate_to_zero(steps: &[f64], values: &[f64]) -> (f64, f64) {
    assert_eq!(steps.len(), values.len());
    assert!(!values.is_empty());
    let n = values.len();
    let mut table = values.to_vec();
    let mut best = table[n - 1];
    let mut change = f64::INFINITY;
    // After pass m, table[i] interpolates points i..=i+m at h = 0.
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (steps[i], steps[i + m]);
            table[i] = (hi * table[i + 1] - hj * table[i]) / (hi - hj);
        }
        let latest = table[n - 1 - m];
        change = (latest - best).abs();
        best = latest;
    }
    (best, change)
}
