//! Plane-wave (OPW) solver for the non-rotating crystal.
//!
//! In ω units the scalar Hamiltonian on the basis `exp(i (k + G)·r)` reads
//!
//! ```text
//! H(G', G) = δ(G', G) [ω0 + ħ |k + G|² / (2 m0)] - v φ(G' - G)
//! ```
//!
//! with `v = c / (2 n l_z)` the potential depth per unit phase. The constant
//! `ω0 = m0 c² / (n² ħ)` is large compared to the band structure, so the
//! solver diagonalizes the detuning `H - ω0` and adds `ω0` back.
//!
//! Rotation never enters here: the Coriolis term contains the position
//! operator and is handled on the k·p basis in [`crate::kp`].

pub mod fields;
pub mod longitudinal;
pub mod mass;
pub mod symmetry;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{derive_params, DerivedParams, ExperimentConfig, LatticeSpec};
use crate::error::{Error, Result};
use crate::kpath::{KPoint, SymmetryPoint};
use crate::lattice::{reciprocal_basis, reciprocal_basis_at, PatternFourier, ReciprocalVector};
use crate::linalg::{eigh, HermitianMatrix};

pub use fields::{reconstruct_fields, FieldReconstruction, FieldSample};
pub use longitudinal::{longitudinal_profile, LongitudinalProfile};
pub use mass::{curvature_richardson, effective_mass_at_t, effective_mass_fd, Direction};
pub use symmetry::{band_edges, classify_t_states, BandEdges, ScalarRep, TGroup};

/// Two photon spin states per scalar band at rest.
pub const SPIN_DEGENERACY: usize = 2;

/// Bloch eigenstate of the scalar Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochState {
    /// Band index `q`, ascending in frequency from 0.
    pub band: usize,
    /// Bloch wavevector measured from Γ, rad/m.
    pub k_perp: [f64; 2],
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// `omega - omega0`, computed without the large offset.
    pub detuning: f64,
    /// Unit-norm plane-wave amplitudes, one per entry of `basis`.
    pub coefficients: Vec<Complex64>,
    pub basis: Arc<[ReciprocalVector]>,
    pub degeneracy: usize,
    pub rep_label: Option<ScalarRep>,
}

impl BlochState {
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Same state with coefficients `a * self + b * other` (not renormalized).
    pub fn superpose(&self, a: Complex64, other: &BlochState, b: Complex64) -> BlochState {
        BlochState {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            ..self.clone()
        }
    }
}

/// Full (non-detuned) Hamiltonian in ω units.
pub fn build_hamiltonian(
    dp: &DerivedParams,
    pf: &PatternFourier,
    basis: &[ReciprocalVector],
    k_perp: [f64; 2],
) -> HermitianMatrix {
    build_with_offset(dp, pf, basis, k_perp, dp.rest_frequency())
}

fn build_with_offset(
    dp: &DerivedParams,
    pf: &PatternFourier,
    basis: &[ReciprocalVector],
    k: [f64; 2],
    offset: f64,
) -> HermitianMatrix {
    let kin = dp.kinetic_coeff();
    let v = dp.v_prefactor;
    HermitianMatrix::from_upper(basis.len(), |i, j| {
        let (gi, gj) = (&basis[i], &basis[j]);
        let mut h = -v * pf.coupling(gi, gj);
        if i == j {
            let (qx, qy) = (k[0] + gi.gx, k[1] + gi.gy);
            h += offset + kin * (qx * qx + qy * qy);
        }
        Complex64::new(h, 0.0)
    })
}

/// Plane-wave solver bound to one lattice and basis.
#[derive(Debug, Clone)]
pub struct OpwSolver {
    lattice: LatticeSpec,
    dp: DerivedParams,
    pattern: PatternFourier,
    basis: Arc<[ReciprocalVector]>,
    halfwidth: usize,
    n_bands: usize,
}

impl OpwSolver {
    pub fn new(lattice: &LatticeSpec, basis_halfwidth: usize, n_bands: usize) -> Self {
        let basis: Arc<[ReciprocalVector]> =
            reciprocal_basis(basis_halfwidth, lattice.pitch).into();
        let n_bands = n_bands.min(basis.len());
        Self {
            lattice: *lattice,
            dp: derive_params(lattice),
            pattern: PatternFourier::for_basis(lattice, basis_halfwidth),
            basis,
            halfwidth: basis_halfwidth,
            n_bands,
        }
    }

    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self::new(&cfg.lattice, cfg.basis_halfwidth, cfg.n_bands)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn params(&self) -> &DerivedParams {
        &self.dp
    }

    pub fn pattern(&self) -> &PatternFourier {
        &self.pattern
    }

    /// Basis at Γ, `|m|, |n| <= halfwidth`.
    pub fn basis(&self) -> &Arc<[ReciprocalVector]> {
        &self.basis
    }

    /// k-centered basis used at `k`; shares the Γ basis whenever it coincides.
    pub fn basis_at(&self, k: [f64; 2]) -> Arc<[ReciprocalVector]> {
        let b = reciprocal_basis_at(self.halfwidth, self.lattice.pitch, k);
        if b[..] == self.basis[..] {
            Arc::clone(&self.basis)
        } else {
            b.into()
        }
    }

    pub fn basis_halfwidth(&self) -> usize {
        self.halfwidth
    }

    pub fn n_bands(&self) -> usize {
        self.n_bands
    }

    /// `H - omega0` at `k`.
    pub fn detuning_hamiltonian(&self, k: [f64; 2]) -> HermitianMatrix {
        build_with_offset(&self.dp, &self.pattern, &self.basis_at(k), k, 0.0)
    }

    /// Tolerance for grouping degenerate eigenvalues at `k`: round-off of
    /// the detuning matrix, far below any symmetry-allowed gap.
    pub fn degeneracy_tol(&self, k: [f64; 2]) -> f64 {
        1e-12 * self.detuning_hamiltonian(k).frobenius_norm()
    }

    /// Lowest `n_bands` eigenstates at `k`.
    pub fn solve_at(&self, k: [f64; 2]) -> Result<Vec<BlochState>> {
        self.solve_n(k, self.n_bands)
    }

    pub fn solve_n(&self, k: [f64; 2], n: usize) -> Result<Vec<BlochState>> {
        let basis = self.basis_at(k);
        let h = build_with_offset(&self.dp, &self.pattern, &basis, k, 0.0);
        let omega0 = self.dp.omega0;
        Ok(lowest_refined(&h, n, k)?
            .into_iter()
            .enumerate()
            .map(|(band, (detuning, coefficients))| BlochState {
                band,
                k_perp: k,
                omega: omega0 + detuning,
                detuning,
                coefficients,
                basis: Arc::clone(&basis),
                degeneracy: SPIN_DEGENERACY,
                rep_label: None,
            })
            .collect())
    }

    /// Detunings of the lowest `n` bands at `k`.
    pub fn detunings_at(&self, k: [f64; 2], n: usize) -> Result<Vec<f64>> {
        self.detunings_in_basis(k, &self.basis_at(k), n)
    }

    /// Detunings at `k` on a caller-held basis, so nearby points can share
    /// one truncation.
    pub fn detunings_in_basis(
        &self,
        k: [f64; 2],
        basis: &[ReciprocalVector],
        n: usize,
    ) -> Result<Vec<f64>> {
        let h = build_with_offset(&self.dp, &self.pattern, basis, k, 0.0);
        Ok(lowest_refined(&h, n, k)?
            .into_iter()
            .map(|(d, _)| d)
            .collect())
    }

    /// States at the zone corner T with representation labels attached and
    /// the degenerate pair rotated onto its x-odd / y-odd members.
    pub fn solve_t_point(&self) -> Result<(Vec<BlochState>, Vec<TGroup>)> {
        let k = SymmetryPoint::T.wavevector(self.lattice.pitch);
        let mut states = self.solve_at(k)?;
        let groups = classify_t_states(&mut states, self.degeneracy_tol(k));
        Ok((states, groups))
    }
}

/// Lowest `n` eigenpairs with each eigenvalue replaced by the Rayleigh
/// quotient of its vector.
///
/// The dense solver resolves eigenvalues only to `ε ‖H‖`, set by the large
/// kinetic energy of the outermost plane waves. The quotient is second
/// order in the vector error and only weighs the matrix where the state
/// lives, which pins degenerate partners to well below 1 rad/s.
fn lowest_refined(
    h: &HermitianMatrix,
    n: usize,
    k: [f64; 2],
) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let e = eigh(h).map_err(|source| Error::AtKPoint {
        kx: k[0],
        ky: k[1],
        source: Box::new(source),
    })?;
    let mut out: Vec<(f64, Vec<Complex64>)> = e
        .vectors
        .into_iter()
        .take(n)
        .map(|v| (h.rayleigh_quotient(&v), v))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Band structure along a k-path.
#[derive(Debug, Clone)]
pub struct BandStructure {
    pub kpoints: Vec<KPoint>,
    /// `bands[i]` are the states at `kpoints[i]`, ascending in frequency.
    pub bands: Vec<Vec<BlochState>>,
    pub config: ExperimentConfig,
}

impl BandStructure {
    pub fn n_bands(&self) -> usize {
        self.bands.first().map_or(0, Vec::len)
    }
}

/// Solves the scalar bands on every k-point of the configured path.
///
/// K-points are solved in parallel on the current rayon pool; the output
/// keeps path order.
pub fn solve_bands(config: &ExperimentConfig) -> Result<BandStructure> {
    config.validate()?;
    let solver = OpwSolver::from_config(config);
    let kpoints = config.kpath.sample(config.lattice.pitch);
    let bands = kpoints
        .par_iter()
        .map(|kp| {
            let mut states = solver.solve_at(kp.k)?;
            if kp.label == Some(SymmetryPoint::T) {
                classify_t_states(&mut states, solver.degeneracy_tol(kp.k));
            }
            Ok(states)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandStructure {
        kpoints,
        bands,
        config: config.clone(),
    })
}

/// Groups indices of ascending `values` whose neighbours differ by at most `tol`.
pub fn degenerate_groups(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}
