//! Paraxial reconstruction of the six field components from a Bloch state.
//!
//! The transverse wave function `ψ_β(r) = p_β Σ_G c_G exp(i κ·r)`, with
//! `κ = k + G` and polarization `p`, is lifted to the full field by the gauge
//! operator
//!
//! ```text
//! Ê_αβ = δ_αβ (1 - ∇⊥²/(4 k_z²)) + ∂_α ∂_β/(2 k_z²) + i δ_α3 ∂_β / k_z
//!      + (Ω / n c) e_3γβ (δ_α3 x_γ - i x_α ∂_γ / k_z)
//! ```
//!
//! applied per plane-wave component with `∂_γ → i κ_γ` (and `∂_3 → 0` on the
//! slow envelope). The rotation terms are kept to first order in Ω and are
//! evaluated at the sample position, since they are linear in coordinates.
//! Electric and magnetic fields follow as
//!
//! ```text
//! E_α = A(z) Z^{1/2}  Ê_αβ ψ_β
//! H_γ = A(z) Z^{-1/2} Ê_γα (ẑ × ψ)_α,   A(z) = e^{i k_z z} (1 + η(z)) / √(2π)
//! ```
//!
//! at `t = 0`.

use num_complex::Complex64;

use super::longitudinal::eta;
use super::BlochState;
use crate::config::{DerivedParams, RotationSpec};
use crate::constants::C;

/// Paraxial validity: every significant `|κ|` must stay below this
/// fraction of `k_z`.
pub const PARAXIAL_LIMIT: f64 = 0.2;

/// Coefficients below this magnitude are ignored in the paraxial check.
const SIGNIFICANT_AMPLITUDE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub position: [f64; 3],
    pub e: [Complex64; 3],
    pub h: [Complex64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldReconstruction {
    pub samples: Vec<FieldSample>,
    /// Set when the state has significant components beyond the paraxial limit.
    pub paraxial_warning: Option<String>,
}

/// Gauge operator applied to one plane-wave component of a transverse
/// vector amplitude `v` at position `r`.
fn gauge_apply(
    kappa: [f64; 2],
    k_z: f64,
    rot_coeff: f64,
    r: [f64; 3],
    v: [Complex64; 2],
) -> [Complex64; 3] {
    let kz2 = k_z * k_z;
    let q2 = kappa[0] * kappa[0] + kappa[1] * kappa[1];
    let diag = 1.0 + q2 / (4.0 * kz2);
    // e_3γβ κ_γ and e_3γβ x_γ for β = x, y
    let curl_k = [-kappa[1], kappa[0]];
    let curl_x = [-r[1], r[0]];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for alpha in 0..3 {
        let mut acc = Complex64::new(0.0, 0.0);
        for beta in 0..2 {
            let mut m = 0.0;
            if alpha == beta {
                m += diag;
            }
            if alpha < 2 {
                m -= kappa[alpha] * kappa[beta] / (2.0 * kz2);
            } else {
                m -= kappa[beta] / k_z;
                m += rot_coeff * curl_x[beta];
            }
            m += rot_coeff * r[alpha] * curl_k[beta] / k_z;
            acc += v[beta] * m;
        }
        out[alpha] = acc;
    }
    out
}

/// Reconstructs `E` and `H` of `state` with the given transverse
/// polarization at each position.
///
/// `alpha` is the effective per-reflection phase of the state (see
/// [`super::longitudinal_profile`]); pass 0 to drop the longitudinal
/// modulation.
pub fn reconstruct_fields(
    state: &BlochState,
    dp: &DerivedParams,
    rot: &RotationSpec,
    alpha: f64,
    polarization: [Complex64; 2],
    positions: &[[f64; 3]],
) -> FieldReconstruction {
    let k = state.k_perp;
    let k_z = dp.k_z;
    let rot_coeff = rot.omega_z / (dp.n_refr * C);
    let z_half = dp.z_impedance.sqrt();

    let max_kappa = state
        .coefficients
        .iter()
        .zip(state.basis.iter())
        .filter(|(c, _)| c.norm() > SIGNIFICANT_AMPLITUDE)
        .map(|(_, g)| ((k[0] + g.gx).powi(2) + (k[1] + g.gy).powi(2)).sqrt())
        .fold(0.0_f64, f64::max);
    let paraxial_warning = (max_kappa > PARAXIAL_LIMIT * k_z).then(|| {
        format!(
            "max |k+G| = {:.3e} rad/m exceeds {PARAXIAL_LIMIT} k_z = {:.3e} rad/m",
            max_kappa,
            PARAXIAL_LIMIT * k_z
        )
    });

    let pol_h = [-polarization[1], polarization[0]];
    let samples = positions
        .iter()
        .map(|&r| {
            let envelope = Complex64::from_polar(1.0, k_z * r[2])
                * (Complex64::new(1.0, 0.0) + eta(alpha, dp.l_z, r[2]))
                / (2.0 * std::f64::consts::PI).sqrt();
            let mut e = [Complex64::new(0.0, 0.0); 3];
            let mut h = [Complex64::new(0.0, 0.0); 3];
            for (c, g) in state.coefficients.iter().zip(state.basis.iter()) {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let kappa = [k[0] + g.gx, k[1] + g.gy];
                let wave = c * Complex64::from_polar(1.0, kappa[0] * r[0] + kappa[1] * r[1]);
                let ve = [polarization[0] * wave, polarization[1] * wave];
                let vh = [pol_h[0] * wave, pol_h[1] * wave];
                let de = gauge_apply(kappa, k_z, rot_coeff, r, ve);
                let dh = gauge_apply(kappa, k_z, rot_coeff, r, vh);
                for a in 0..3 {
                    e[a] += de[a];
                    h[a] += dh[a];
                }
            }
            for a in 0..3 {
                e[a] *= envelope * z_half;
                h[a] *= envelope / z_half;
            }
            FieldSample { position: r, e, h }
        })
        .collect();
    FieldReconstruction {
        samples,
        paraxial_warning,
    }
}
