//! Conversion from reduced units (`ħ = c = 1`, lengths in a chosen unit) to SI.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `ħc` in J·m.
pub fn hbar_c() -> f64 {
    HBAR * SPEED_OF_LIGHT
}

/// Force in newtons from a reduced force with lengths measured in `unit` metres.
pub fn force_to_si(force: f64, unit: f64) -> f64 {
    force * hbar_c() / (unit * unit)
}

/// Energy in joules from a reduced energy with lengths measured in `unit` metres.
pub fn energy_to_si(energy: f64, unit: f64) -> f64 {
    energy * hbar_c() / unit
}
