//! One-dimensional Casimir energies and forces from scattering matrices.
//!
//! Mirrors are described by 2×2 S-matrices ([`scattering`]) produced by
//! closed-form models ([`models`]). Two mirrors and the gap between them form
//! a cavity ([`cavity`]); its vacuum energy and the force between the mirrors
//! follow from integrals over imaginary wavenumbers ([`engine`]). The
//! [`modes`] module recovers energy differences independently by summing the
//! shifted modes of a large box.
//!
//! ```
//! use casimir_core::{casimir_force, CavityConfig, QuadratureSpec, ScattererModel};
//!
//! let mirror = ScattererModel::perfect_mirror();
//! let cavity = CavityConfig::new(mirror, mirror, 1.0).unwrap();
//! let force = casimir_force(&cavity, &QuadratureSpec::default()).unwrap();
//! assert!((force.value + std::f64::consts::PI / 24.0).abs() < 1e-10);
//! ```

pub mod cavity;
pub mod engine;
pub mod error;
pub mod models;
pub mod modes;
pub mod quadrature;
pub mod scattering;
pub mod units;

pub use cavity::{cavity_det_s, cavity_smatrix, compose_adjacent, CavityConfig, RoundTripFactor};
pub use engine::{
    casimir_energy, casimir_energy_real_axis, casimir_energy_series, casimir_force, casimir_force_series,
    force_from_energy_fd, ideal_force_3d, perfect_mirror_force, EnergyResult, ForceResult, MethodTag,
    QuadratureMethod, QuadratureSpec, SeriesEnergyResult, SeriesForceResult,
};
pub use error::{CasimirError, Result};
pub use models::{ModelKind, ScattererModel};
pub use modes::{energy_difference_oracle, mode_sum_energy_shift, oracle_convergence, BoxSpec, OracleRow};
pub use scattering::{ComplexMat2, ScatteringMatrix, TransferMatrix};
