//! Effective masses from the curvature of plane-wave bands.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{degenerate_groups, OpwSolver, ScalarRep};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::kpath::SymmetryPoint;

/// Default stencil step in units of `π / Λ`.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direction {
    /// Along x̂ (towards Z from T).
    Axis,
    /// Along (x̂ + ŷ)/√2 (towards Γ from T).
    Diagonal,
    Custom([f64; 2]),
}

impl Direction {
    pub fn unit(self) -> [f64; 2] {
        match self {
            Self::Axis => [1.0, 0.0],
            Self::Diagonal => [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            Self::Custom([x, y]) => {
                let n = (x * x + y * y).sqrt();
                [x / n, y / n]
            }
        }
    }
}

/// Second derivative of `f` at 0 from central differences with steps `h`
/// and `h/2`, Richardson-combined to cancel the `h²` error term.
pub fn curvature_richardson(mut f: impl FnMut(f64) -> Result<f64>, h: f64) -> Result<f64> {
    let f0 = f(0.0)?;
    let mut central = |s: f64| -> Result<f64> { Ok((f(s)? - 2.0 * f0 + f(-s)?) / (s * s)) };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Effective mass of `band` at `k0` along `dir`: `m = ħ / (d²ω/dk²)`.
///
/// All stencil points use the basis of `k0`; switching truncation between
/// points would show up as spurious curvature. Fails when the band is
/// degenerate with a neighbour anywhere on the stencil, since the curvature
/// is then not defined by a single branch.
pub fn effective_mass_fd(
    solver: &OpwSolver,
    k0: [f64; 2],
    band: usize,
    dir: Direction,
    step: f64,
) -> Result<f64> {
    let u = dir.unit();
    let basis = solver.basis_at(k0);
    let n = (band + 2).min(basis.len());
    let tol = solver.degeneracy_tol(k0);
    let curv = curvature_richardson(
        |s| {
            let k = [k0[0] + s * u[0], k0[1] + s * u[1]];
            let d = solver.detunings_in_basis(k, &basis, n)?;
            let isolated = degenerate_groups(&d, tol)
                .iter()
                .any(|g| g.len() == 1 && g.start == band);
            if !isolated {
                return Err(Error::DegenerateStencil { band });
            }
            Ok(d[band])
        },
        step,
    )?;
    Ok(HBAR / curv)
}

/// Effective mass at T of the band edge carrying `rep`, with the default
/// step `1e-3 π/Λ`.
pub fn effective_mass_at_t(solver: &OpwSolver, rep: ScalarRep, dir: Direction) -> Result<f64> {
    let (states, _) = solver.solve_t_point()?;
    let band = states
        .iter()
        .position(|s| s.rep_label == Some(rep))
        .ok_or_else(|| Error::MissingRepresentation {
            missing: rep.label().to_string(),
            found: states
                .iter()
                .map(|s| s.rep_label.map_or("-", ScalarRep::label))
                .collect::<Vec<_>>()
                .join(", "),
        })?;
    let pitch = solver.lattice().pitch;
    effective_mass_fd(
        solver,
        SymmetryPoint::T.wavevector(pitch),
        band,
        dir,
        DEFAULT_STEP_FRACTION * PI / pitch,
    )
}
