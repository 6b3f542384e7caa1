//! Eight-band k·p model around the zone corner T, including rotation.
//!
//! The Hamiltonian is block diagonal in photon helicity. For `k` measured
//! from T, `k± = kx ± i ky` and `q± = ħ k± / (2P)`, each 4×4 block in ω
//! units is
//!
//! ```text
//! upper = H0 + Hkp  + HΩ + ħ k²/(2 m0)
//! lower = H0 + Hkp* - HΩ + ħ k²/(2 m0)
//!
//! H0  = diag(ω_T5', ω_T1, ω_T1, ω_T5)
//! Hkp = (P/m0) [[0, k-, k+, 0], [k+, 0, 0, k-], [k-, 0, 0, -k+], [0, k+, -k-, 0]]
//! HΩ  = -(Ω/n²) [[1,      -M- q-, M- q+,  0     ],
//!                [-M- q+, 1 - M,  0,      -M+ q-],
//!                [M- q-,  0,      1 + M,  -M+ q+],
//!                [0,      -M+ q+, -M+ q-, 1     ]]
//! ```
//!
//! with `M = M+ + M-`, in the basis order (T5'±, T1∓iT2, T3±iT4, T5±).
//! Band edges are held as detunings from `ω0` and every matrix can be built
//! in a shifted frame, so splittings of order Ω are not swamped by the
//! carrier frequency.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::config::{derive_params, LatticeSpec, RotationSpec};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::linalg::{eigh, HermitianMatrix};
use crate::opw::mass::curvature_richardson;
use crate::opw::{band_edges, BandEdges, OpwSolver};
use crate::zeeman::m_closed_form;

/// k·p validity radius around T in units of `π / Λ`.
pub const VALIDITY_FRACTION: f64 = 0.5;

/// Basis slot of each band edge inside a 4×4 block.
pub const SLOT_T5P: usize = 0;
pub const SLOT_T1_A: usize = 1;
pub const SLOT_T1_B: usize = 2;
pub const SLOT_T5: usize = 3;

/// Where the orbital parameters `M±` come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MSource {
    /// Square-pixel closed form.
    ClosedForm,
    /// Effective masses of the T5 and T5' edges (kg), through
    /// `M+ = -(m0/m_T5 - 1)/2`, `M- = (m0/m_T5' - 1)/2`.
    Masses { m_t5: f64, m_t5p: f64 },
    /// Masses implied by the band edges and `P` within the eight-band
    /// model itself: `M+ = 2P²/(ħ m0 (ω_T1 - ω_T5))`,
    /// `M- = 2P²/(ħ m0 (ω_T5' - ω_T1))`.
    BandEdges,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpModel {
    pub edges: BandEdges,
    /// Interband momentum `P`, kg·m/s.
    pub p_interband: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub m0: f64,
    pub n_refr: f64,
    /// Lattice period, m (sets the validity window).
    pub pitch: f64,
}

impl KpModel {
    pub fn m_total(&self) -> f64 {
        self.m_plus + self.m_minus
    }

    /// `m0 / m_T5` implied by `M+`.
    pub fn inverse_mass_ratio_t5(&self) -> f64 {
        1.0 - 2.0 * self.m_plus
    }

    /// `m0 / m_T5'` implied by `M-`.
    pub fn inverse_mass_ratio_t5p(&self) -> f64 {
        1.0 + 2.0 * self.m_minus
    }

    pub fn validity_radius(&self) -> f64 {
        VALIDITY_FRACTION * PI / self.pitch
    }
}

/// `M±` implied by the band-edge gaps through second-order k·p.
pub fn m_from_edges(edges: &BandEdges, p: f64, m0: f64) -> (f64, f64) {
    let c = 2.0 * p * p / (HBAR * m0);
    (c / (edges.t1 - edges.t5), c / (edges.t5p - edges.t1))
}

pub fn kp_from_opw(edges: &BandEdges, lattice: &LatticeSpec, source: MSource) -> Result<KpModel> {
    if !(edges.t5 < edges.t1 && edges.t1 < edges.t5p) {
        return Err(Error::EdgeOrdering(format!(
            "need ω_T5 < ω_T1 < ω_T5', got detunings {:e}, {:e}, {:e} rad/s",
            edges.t5, edges.t1, edges.t5p
        )));
    }
    let dp = derive_params(lattice);
    let (m_plus, m_minus) = match source {
        MSource::ClosedForm => m_closed_form(lattice, &dp)?,
        MSource::Masses { m_t5, m_t5p } => {
            (-0.5 * (dp.m0 / m_t5 - 1.0), 0.5 * (dp.m0 / m_t5p - 1.0))
        }
        MSource::BandEdges => m_from_edges(edges, dp.p_interband, dp.m0),
    };
    Ok(KpModel {
        edges: *edges,
        p_interband: dp.p_interband,
        m_plus,
        m_minus,
        m0: dp.m0,
        n_refr: lattice.n_refr,
        pitch: lattice.pitch,
    })
}

/// Convenience: solve T with the plane-wave solver, read the edges and build
/// the model.
pub fn kp_model_from_solver(solver: &OpwSolver, source: MSource) -> Result<KpModel> {
    let (states, _) = solver.solve_t_point()?;
    let edges = band_edges(&states, solver.params().omega0)?;
    kp_from_opw(&edges, solver.lattice(), source)
}

/// The two blocks with `offset` added to every edge detuning on the diagonal.
fn blocks(
    model: &KpModel,
    k: [f64; 2],
    rot: &RotationSpec,
    offset: f64,
) -> (HermitianMatrix, HermitianMatrix) {
    let kp = Complex64::new(k[0], k[1]);
    let km = kp.conj();
    let vel = model.p_interband / model.m0;
    let free = HBAR / (2.0 * model.m0) * (k[0] * k[0] + k[1] * k[1]);
    let e = &model.edges;
    let h0 = [e.t5p + offset, e.t1 + offset, e.t1 + offset, e.t5 + offset];
    let z = Complex64::new(0.0, 0.0);

    let hkp = [
        [z, km, kp, z],
        [kp, z, z, km],
        [km, z, z, -kp],
        [z, kp, -km, z],
    ];
    let (mp, mm) = (model.m_plus, model.m_minus);
    let m = mp + mm;
    let qp = kp * (HBAR / (2.0 * model.p_interband));
    let qm = qp.conj();
    let one = Complex64::new(1.0, 0.0);
    let homega = [
        [one, -qm * mm, qp * mm, z],
        [-qp * mm, one * (1.0 - m), z, -qm * mp],
        [qm * mm, z, one * (1.0 + m), -qp * mp],
        [z, -qp * mp, -qm * mp, one],
    ];
    let w = -rot.omega_z / (model.n_refr * model.n_refr);

    let upper = HermitianMatrix::from_upper(4, |i, j| {
        let mut v = hkp[i][j] * vel + homega[i][j] * w;
        if i == j {
            v += h0[i] + free;
        }
        v
    });
    let lower = HermitianMatrix::from_upper(4, |i, j| {
        let mut v = hkp[i][j].conj() * vel - homega[i][j] * w;
        if i == j {
            v += h0[i] + free;
        }
        v
    });
    (upper, lower)
}

/// Upper and lower blocks in absolute ω units, `k` relative to T.
pub fn build_kp_hamiltonian(
    model: &KpModel,
    k_rel: [f64; 2],
    rot: &RotationSpec,
) -> (HermitianMatrix, HermitianMatrix) {
    let kk = (k_rel[0].powi(2) + k_rel[1].powi(2)).sqrt();
    if kk > model.validity_radius() {
        warn!(
            "|k - T| = {kk:.3e} rad/m is outside the k·p window {:.3e} rad/m",
            model.validity_radius()
        );
    }
    blocks(model, k_rel, rot, model.edges.omega0)
}

/// Same blocks as detunings from `ω0`.
pub fn build_kp_detuning(
    model: &KpModel,
    k_rel: [f64; 2],
    rot: &RotationSpec,
) -> (HermitianMatrix, HermitianMatrix) {
    blocks(model, k_rel, rot, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpEigen {
    pub omega: f64,
    pub detuning: f64,
    /// +1 for the upper (left-handed) block, -1 for the lower.
    pub block: i8,
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpPoint {
    /// Wavevector relative to T, rad/m.
    pub k_rel: [f64; 2],
    pub within_window: bool,
    /// Eight eigenpairs, ascending in frequency.
    pub states: Vec<KpEigen>,
}

pub type KpSpectrum = Vec<KpPoint>;

/// Eigenpairs of both blocks at each `k` (relative to T).
pub fn kp_bands(model: &KpModel, k_rel: &[[f64; 2]], rot: &RotationSpec) -> Result<KpSpectrum> {
    k_rel
        .iter()
        .map(|&k| {
            let within =
                (k[0].powi(2) + k[1].powi(2)).sqrt() <= model.validity_radius() * (1.0 + 1e-12);
            let (up, lo) = build_kp_detuning(model, k, rot);
            let mut states = Vec::with_capacity(8);
            for (block, h) in [(1_i8, up), (-1_i8, lo)] {
                let e = eigh(&h)?;
                for (d, v) in e.values.into_iter().zip(e.vectors) {
                    states.push(KpEigen {
                        omega: model.edges.omega0 + d,
                        detuning: d,
                        block,
                        vector: v,
                    });
                }
            }
            states.sort_by(|a, b| {
                a.detuning
                    .total_cmp(&b.detuning)
                    .then(b.block.cmp(&a.block))
            });
            Ok(KpPoint {
                k_rel: k,
                within_window: within,
                states,
            })
        })
        .collect()
}

/// Rotation splittings at T read off the diagonalized k·p blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TSplittings {
    /// Spin splitting of the T5 edge, lower minus upper block.
    pub delta_s: f64,
    /// Spin splitting of the T5' edge.
    pub delta_s_t5p: f64,
    /// Spin splitting inside the T1-T4 manifold.
    pub delta_s_orbital: f64,
    /// Orbital splitting inside the T1-T4 manifold (upper block).
    pub delta_l: f64,
}

/// Eigenvalue of the eigenvector dominated by basis slot `slot`.
fn level(e: &crate::linalg::Eigh, slot: usize) -> f64 {
    let (i, _) = e
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v[slot].norm_sqr()))
        .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
    e.values[i]
}

/// Splittings at `k = 0` from diagonalizing both blocks, each manifold in
/// its own frame (edge subtracted exactly) so the result is accurate to
/// round-off of Ω itself.
pub fn zeeman_splittings_at_t(model: &KpModel, rot: &RotationSpec) -> Result<TSplittings> {
    let at = |edge: f64| -> Result<(crate::linalg::Eigh, crate::linalg::Eigh)> {
        let (u, l) = blocks(model, [0.0, 0.0], rot, -edge);
        Ok((eigh(&u)?, eigh(&l)?))
    };
    let (u5, l5) = at(model.edges.t5)?;
    let (u5p, l5p) = at(model.edges.t5p)?;
    let (u1, l1) = at(model.edges.t1)?;
    Ok(TSplittings {
        delta_s: level(&l5, SLOT_T5) - level(&u5, SLOT_T5),
        delta_s_t5p: level(&l5p, SLOT_T5P) - level(&u5p, SLOT_T5P),
        delta_s_orbital: level(&l1, SLOT_T1_B) - level(&u1, SLOT_T1_A),
        delta_l: level(&u1, SLOT_T1_A) - level(&u1, SLOT_T1_B),
    })
}

/// Finite-difference masses `(m_T5, m_T'5)` of the k·p branches at T
/// along x̂ at rest, with Richardson step `step`.
///
/// Each branch is evaluated in its own edge frame so the curvature is not
/// swamped by the absolute detuning.
pub fn kp_edge_masses(model: &KpModel, step: f64) -> Result<(f64, f64)> {
    let rot = RotationSpec::at_rest();
    let branch = |slot: usize, edge: f64| {
        curvature_richardson(
            |s| {
                let (u, _) = blocks(model, [s, 0.0], &rot, -edge);
                Ok(level(&eigh(&u)?, slot))
            },
            step,
        )
    };
    let c5 = branch(SLOT_T5, model.edges.t5)?;
    let c5p = branch(SLOT_T5P, model.edges.t5p)?;
    Ok((HBAR / c5, HBAR / c5p))
}
