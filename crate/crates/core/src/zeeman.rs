//! Closed-form Coriolis-Zeeman quantities.
//!
//! For a lattice of square pixels with `s = sinc(π √FF)` the orbital
//! parameters are
//!
//! ```text
//! M± = 2 n l_z P² / (ħ m0 c FF Δφ) · [s (1 ± s)]⁻¹
//! ```
//!
//! and a rotation Ω about the cavity axis splits the T-point levels by
//! `Δω_S = 2Ω/n²` (spin) and `Δω_L = 2MΩ/n²` (orbital, `M = M+ + M-`).
//! The orbital spread of the band-edge states is
//! `<r²> = ħ² (M+² + M-²) / (2 P²)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::{derive_params, DerivedParams, LatticeSpec};
use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::lattice::sinc;

/// `M+` and `M-` for the square-pixel lattice.
pub fn m_closed_form(lattice: &LatticeSpec, dp: &DerivedParams) -> Result<(f64, f64)> {
    if lattice.dphi == 0.0 {
        return Err(Error::EmptyLattice);
    }
    let ff = lattice.fill_factor;
    let s = sinc(PI * ff.sqrt());
    let prefactor = 2.0 * dp.n_refr * dp.l_z * dp.p_interband * dp.p_interband
        / (HBAR * dp.m0 * C * ff * lattice.dphi);
    Ok((prefactor / (s * (1.0 + s)), prefactor / (s * (1.0 - s))))
}

/// `(Δω_S, Δω_L)` for rotation rate `omega_rot`.
pub fn splittings(m_plus: f64, m_minus: f64, n_refr: f64, omega_rot: f64) -> (f64, f64) {
    let n2 = n_refr * n_refr;
    (
        2.0 * omega_rot / n2,
        2.0 * (m_plus + m_minus) * omega_rot / n2,
    )
}

/// `sqrt(<r²>) = ħ sqrt((M+² + M-²)/2) / P`.
pub fn spread_rms(m_plus: f64, m_minus: f64, p_interband: f64) -> f64 {
    HBAR * (0.5 * (m_plus * m_plus + m_minus * m_minus)).sqrt() / p_interband
}

/// Ratio of the spread-based orbital splitting
/// `2π sqrt(2<r²>) / (n² Λ) · (1 + s²)⁻¹` to `2M/n²`.
///
/// With the closed-form `M±` this equals `1/sqrt(1 + s²)` rather than 1;
/// it is reported, not enforced.
pub fn consistency_ratio(lattice: &LatticeSpec, m_plus: f64, m_minus: f64, n_refr: f64) -> f64 {
    let dp = derive_params(lattice);
    let s = sinc(PI * lattice.fill_factor.sqrt());
    let n2 = n_refr * n_refr;
    let r1 = 2.0 * (m_plus + m_minus) / n2;
    let rms = spread_rms(m_plus, m_minus, dp.p_interband);
    let r2 = 2.0 * PI * (2.0 * rms * rms).sqrt() / (n2 * lattice.pitch) / (1.0 + s * s);
    r2 / r1
}

/// Circular polarization: +1 left-handed, -1 right-handed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Self::Left => 1.0,
            Self::Right => -1.0,
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Effective index of a circularly polarized paraxial wave in a rotating
/// cavity: `n + (Ω×r/c)·τ ± (Ω·τ)/(ω n)`.
///
/// The second term is the Sagnac (axial) nonreciprocity, the third the
/// rotation-induced circular birefringence.
pub fn effective_index(
    n_refr: f64,
    omega_rot: [f64; 3],
    r: [f64; 3],
    tau: [f64; 3],
    omega0: f64,
    handedness: Handedness,
) -> f64 {
    let g = cross(omega_rot, r).map(|x| x / C);
    n_refr + dot(g, tau) + handedness.sign() * dot(omega_rot, tau) / (omega0 * n_refr)
}

/// Closed-form summary for one lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeemanResult {
    pub m_plus: f64,
    pub m_minus: f64,
    pub m_total: f64,
    pub delta_omega_s_per_omega: f64,
    pub delta_omega_l_per_omega: f64,
    /// `sqrt(<r²>)`, m.
    pub spread_rms: f64,
    /// `s = sinc(π √FF)`.
    pub sinc_s: f64,
    pub consistency_ratio: f64,
}

pub fn analyze(lattice: &LatticeSpec) -> Result<ZeemanResult> {
    let dp = derive_params(lattice);
    let (m_plus, m_minus) = m_closed_form(lattice, &dp)?;
    let (ds, dl) = splittings(m_plus, m_minus, lattice.n_refr, 1.0);
    Ok(ZeemanResult {
        m_plus,
        m_minus,
        m_total: m_plus + m_minus,
        delta_omega_s_per_omega: ds,
        delta_omega_l_per_omega: dl,
        spread_rms: spread_rms(m_plus, m_minus, dp.p_interband),
        sinc_s: sinc(PI * lattice.fill_factor.sqrt()),
        consistency_ratio: consistency_ratio(lattice, m_plus, m_minus, lattice.n_refr),
    })
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub dphi: f64,
    pub pitch_um: f64,
    pub ff: f64,
    pub result: ZeemanResult,
}

impl SweepRow {
    pub fn new(lattice: &LatticeSpec) -> Result<Self> {
        Ok(Self {
            dphi: lattice.dphi,
            pitch_um: lattice.pitch * 1e6,
            ff: lattice.fill_factor,
            result: analyze(lattice)?,
        })
    }
}
