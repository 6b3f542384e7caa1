//! Physical constants (CODATA 2018 exact/recommended values, SI units).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.997_924_58e8;

/// Rad/s → GHz (ordinary frequency).
pub const RAD_S_TO_GHZ: f64 = 1.0 / (2.0 * std::f64::consts::PI * 1e9);
