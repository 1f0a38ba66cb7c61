use thiserror::Error;

/// Errors raised by the scattering, cavity and integration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Transmission amplitude (or T₂₂) too small to invert.
    #[error("degenerate S/T conversion: |{element}| = {magnitude:e} is below {threshold:e}")]
    DegenerateConversion {
        element: &'static str,
        magnitude: f64,
        threshold: f64,
    },

    #[error("cavity resonance: |1 - round trip| = {distance:e}")]
    CavityResonance { distance: f64 },

    #[error("wavenumber {re} + {im}i lies outside the closed upper half-plane")]
    EvaluationDomain { re: f64, im: f64 },

    #[error("model `{model}` has a pole at wavenumber {re} + {im}i")]
    PoleEncountered { model: String, re: f64, im: f64 },

    #[error("tolerance not met: estimated error {estimate:e} exceeds target {target:e} after {nodes} nodes")]
    ToleranceNotMet {
        estimate: f64,
        target: f64,
        nodes: usize,
    },

    #[error("model `{0}` is not causal; contour rotation refused")]
    NonCausalModel(String),

    #[error("scattering matrix is not unitary: |det S| - 1 = {0:e}")]
    NonUnitaryInput(f64),

    #[error("phase increment {jump:.3} rad at k = {k} cannot be unwrapped; refine the grid")]
    CutoffTooCoarse { k: f64, jump: f64 },

    #[error("cannot parse model spec `{spec}`: {reason}")]
    ModelParse { spec: String, reason: String },
}

pub type Result<T> = std::result::Result<T, CasimirError>;
