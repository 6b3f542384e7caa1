//! Periodic part of the fast longitudinal field factor.
//!
//! Each reflection at the patterned mirror adds the effective phase
//! `α = <ψ|φ|ψ>`. Over one period `[-l_z, l_z)` of the unfolded cavity the
//! factor is
//!
//! ```text
//! 1 + η(z) = exp{ i α [θ(z) - 1/2 - z / (2 l_z)] }
//! ```
//!
//! a unimodular sawtooth phase that is odd in `z` and vanishes at `z = 0`
//! and at the period ends.

use num_complex::Complex64;

use super::BlochState;
use crate::lattice::PatternFourier;

#[derive(Debug, Clone, PartialEq)]
pub struct LongitudinalProfile {
    /// Effective phase per reflection.
    pub alpha: f64,
    /// Cavity length `l_z`; the period is `2 l_z`.
    pub l_z: f64,
    /// Uniform grid over `[-l_z, l_z)`.
    pub z: Vec<f64>,
    pub eta: Vec<Complex64>,
}

impl LongitudinalProfile {
    /// `η(z)` at any `z`, folded into the period.
    pub fn eta_at(&self, z: f64) -> Complex64 {
        eta(self.alpha, self.l_z, z)
    }

    /// `<|η|>` over the period (grid average).
    pub fn mean_abs_eta(&self) -> f64 {
        self.eta.iter().map(|e| e.norm()).sum::<f64>() / self.eta.len() as f64
    }

    /// `<∂η/∂z>` over the period from periodic forward differences.
    pub fn mean_deta_dz(&self) -> Complex64 {
        let n = self.eta.len();
        let dz = 2.0 * self.l_z / n as f64;
        let sum: Complex64 = (0..n)
            .map(|i| (self.eta[(i + 1) % n] - self.eta[i]) / dz)
            .sum();
        sum / n as f64
    }
}

/// Sawtooth phase `θ(z) - 1/2 - z/(2 l_z)` on the folded coordinate, with
/// the step taken as 1/2 at the mirror itself.
fn sawtooth(l_z: f64, z: f64) -> f64 {
    let period = 2.0 * l_z;
    let zf = z - period * ((z + l_z) / period).floor();
    let step = if zf > 0.0 {
        1.0
    } else if zf < 0.0 {
        0.0
    } else {
        0.5
    };
    step - 0.5 - zf / period
}

pub fn eta(alpha: f64, l_z: f64, z: f64) -> Complex64 {
    Complex64::from_polar(1.0, alpha * sawtooth(l_z, z)) - 1.0
}

/// `α = Σ conj(c_G') c_G φ(G' - G)` for a unit-norm state.
pub fn effective_phase(state: &BlochState, pf: &PatternFourier) -> f64 {
    let basis = &state.basis;
    let c = &state.coefficients;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, gi) in basis.iter().enumerate() {
        if c[i].norm_sqr() == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for (j, gj) in basis.iter().enumerate() {
            row += c[j] * pf.coupling(gi, gj);
        }
        acc += c[i].conj() * row;
    }
    acc.re
}

/// Samples the longitudinal factor of `state` on `samples` grid points.
pub fn longitudinal_profile(
    state: &BlochState,
    pf: &PatternFourier,
    samples: usize,
) -> LongitudinalProfile {
    let lat = pf.lattice();
    let l_z = lat.lambda_vac / lat.n_refr;
    let alpha = effective_phase(state, pf);
    let z: Vec<f64> = (0..samples)
        .map(|i| -l_z + 2.0 * l_z * i as f64 / samples as f64)
        .collect();
    let eta = z.iter().map(|&zi| eta(alpha, l_z, zi)).collect();
    LongitudinalProfile { alpha, l_z, z, eta }
}
