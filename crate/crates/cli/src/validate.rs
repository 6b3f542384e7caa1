//! `validate`: cross-checks between the analytic, plane-wave and k·p paths.

use std::f64::consts::PI;

use czphc_core::config::derive_params;
use czphc_core::kp::{kp_edge_masses, kp_model_from_solver, MSource};
use czphc_core::kpath::SymmetryPoint;
use czphc_core::lattice::{fourier_by_quadrature, fourier_coefficient, sinc};
use czphc_core::opw::{effective_mass_at_t, longitudinal_profile, Direction, OpwSolver, ScalarRep};
use czphc_core::zeeman::{consistency_ratio, m_closed_form};
use czphc_core::{ExperimentConfig, Result};
use serde::Serialize;

use crate::bands::{kp_opw_agreement, AGREEMENT_RADIUS, AGREEMENT_TOLERANCE};

pub const FOURIER_TOL: f64 = 1e-10;
pub const FOURIER_MAX_INDEX: i32 = 5;
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Spread allowed inside a degenerate T group, rad/s.
pub const CLUSTER_TOL: f64 = 1.0;
/// Smallest gap between T groups, rad/s.
pub const MIN_GROUP_GAP: f64 = 1e6;
pub const FSUM_TOL: f64 = 1e-6;
pub const MASS_TOL: f64 = 0.25;
pub const UNIMODULAR_TOL: f64 = 1e-12;
pub const RATIO_TOL: f64 = 1e-10;
/// Relative change of the T edges (against the absolute frequency) when
/// the basis half-width grows by two.
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// Required checks decide the exit code; the others only warn.
    pub required: bool,
    pub status: CheckStatus,
    pub value: Option<f64>,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub lattice: czphc_core::LatticeSpec,
    pub basis_halfwidth: usize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn failed_required(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.required && c.status == CheckStatus::Fail)
            .map(|c| c.name.to_string())
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Warn => "WARN",
                CheckStatus::Fail => "FAIL",
            };
            let value = c.value.map_or("-".to_string(), |v| format!("{v:.3e}"));
            out.push_str(&format!(
                "{tag}  {:<28} value {value:<10} limit {:.1e}  {}\n",
                c.name, c.threshold, c.detail
            ));
        }
        let failed = self.failed_required();
        if failed.is_empty() {
            out.push_str("all required checks passed\n");
        } else {
            out.push_str(&format!("failed: {}\n", failed.join(", ")));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Outcome of one measurement: value, pass flag and a short note.
type Measured = Result<(f64, bool, String)>;

fn check(name: &'static str, required: bool, threshold: f64, m: Measured) -> Check {
    let (status, value, detail) = match m {
        Ok((v, true, d)) => (CheckStatus::Pass, Some(v), d),
        Ok((v, false, d)) => (
            if required {
                CheckStatus::Fail
            } else {
                CheckStatus::Warn
            },
            Some(v),
            d,
        ),
        Err(e) => (
            if required {
                CheckStatus::Fail
            } else {
                CheckStatus::Warn
            },
            None,
            e.to_string(),
        ),
    };
    Check {
        name,
        required,
        status,
        value,
        threshold,
        detail,
    }
}

fn fourier(cfg: &ExperimentConfig) -> Measured {
    let l = &cfg.lattice;
    let mut worst = 0.0_f64;
    for m in -FOURIER_MAX_INDEX..=FOURIER_MAX_INDEX {
        for n in -FOURIER_MAX_INDEX..=FOURIER_MAX_INDEX {
            worst =
                worst.max((fourier_coefficient(l, m, n) - fourier_by_quadrature(l, m, n)).abs());
        }
    }
    Ok((
        worst,
        worst <= FOURIER_TOL,
        format!("|m|,|n| <= {FOURIER_MAX_INDEX}, absolute"),
    ))
}

fn residuals(solver: &OpwSolver) -> Measured {
    let pitch = solver.lattice().pitch;
    let mut worst = 0.0_f64;
    for k in [
        SymmetryPoint::Gamma.wavevector(pitch),
        SymmetryPoint::Z.wavevector(pitch),
        SymmetryPoint::T.wavevector(pitch),
        [0.37 * PI / pitch, 0.11 * PI / pitch],
    ] {
        let h = solver.detuning_hamiltonian(k);
        let scale = h.frobenius_norm();
        for s in solver.solve_at(k)? {
            let hv = h.apply(&s.coefficients);
            let r: f64 = hv
                .iter()
                .zip(&s.coefficients)
                .map(|(a, v)| (a - v * s.detuning).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r / scale);
        }
    }
    Ok((
        worst,
        worst <= RESIDUAL_TOL,
        "‖Hv - λv‖ / ‖H‖ at Γ, Z, T and a generic k".into(),
    ))
}

fn t_degeneracy(solver: &OpwSolver) -> Measured {
    let (states, groups) = solver.solve_t_point()?;
    let lowest: Vec<_> = groups.iter().take(3).collect();
    let sizes: Vec<usize> = lowest.iter().map(|g| g.bands.len()).collect();
    let reps: Vec<ScalarRep> = lowest.iter().map(|g| g.rep).collect();
    let spread = lowest
        .iter()
        .map(|g| states[g.bands.end - 1].detuning - states[g.bands.start].detuning)
        .fold(0.0_f64, f64::max);
    let gap = lowest
        .windows(2)
        .map(|w| states[w[1].bands.start].detuning - states[w[0].bands.end - 1].detuning)
        .fold(f64::INFINITY, f64::min);
    let ok = sizes == [1, 2, 1]
        && reps == [ScalarRep::S, ScalarRep::XYPair, ScalarRep::XY]
        && spread <= CLUSTER_TOL
        && gap >= MIN_GROUP_GAP;
    let labels: Vec<&str> = reps.iter().map(|r| r.label()).collect();
    Ok((
        spread,
        ok,
        format!(
            "multiplicities {sizes:?} [{}], min gap {gap:.3e} rad/s",
            labels.join(", ")
        ),
    ))
}

fn kp_vs_opw(solver: &OpwSolver) -> Measured {
    let model = kp_model_from_solver(solver, MSource::BandEdges)?;
    let worst = kp_opw_agreement(solver, &model, AGREEMENT_RADIUS, 10)?;
    Ok((
        worst,
        worst <= AGREEMENT_TOLERANCE,
        format!("|k - T| <= {AGREEMENT_RADIUS} π/Λ, fraction of the eight-band span"),
    ))
}

/// Richardson step for the k·p masses: `1e-4 π/Λ`, reduced for weak
/// lattices so that `P h / m0` stays well below the smallest gap.
pub fn fsum_step(model: &czphc_core::kp::KpModel) -> f64 {
    let gap = (model.edges.t1 - model.edges.t5).min(model.edges.t5p - model.edges.t1);
    let vel = model.p_interband / model.m0;
    (1e-4 * PI / model.pitch).min(2e-3 * gap / vel)
}

fn f_sum(solver: &OpwSolver) -> Measured {
    let model = kp_model_from_solver(solver, MSource::BandEdges)?;
    let h = fsum_step(&model);
    let (m5, m5p) = kp_edge_masses(&model, h)?;
    let e5 = (m5 * model.inverse_mass_ratio_t5() / model.m0 - 1.0).abs();
    let e5p = (m5p * model.inverse_mass_ratio_t5p() / model.m0 - 1.0).abs();
    let worst = e5.max(e5p);
    Ok((
        worst,
        worst <= FSUM_TOL,
        format!(
            "T5 {e5:.2e}, T5' {e5p:.2e}, step {:.2e} π/Λ",
            h * model.pitch / PI
        ),
    ))
}

fn masses(solver: &OpwSolver) -> Measured {
    let dp = solver.params();
    let (cp, cm) = m_closed_form(solver.lattice(), dp)?;
    let m5 = effective_mass_at_t(solver, ScalarRep::S, Direction::Axis)?;
    let m5p = effective_mass_at_t(solver, ScalarRep::XY, Direction::Axis)?;
    let fp = -0.5 * (dp.m0 / m5 - 1.0);
    let fm = 0.5 * (dp.m0 / m5p - 1.0);
    let (dp_, dm) = (fp / cp - 1.0, fm / cm - 1.0);
    let worst = dp_.abs().max(dm.abs());
    Ok((
        worst,
        worst <= MASS_TOL,
        format!(
            "M+ {fp:.4e} vs {cp:.4e} ({:+.2}%), M- {fm:.4e} vs {cm:.4e} ({:+.2}%)",
            100.0 * dp_,
            100.0 * dm
        ),
    ))
}

fn unimodular(solver: &OpwSolver) -> Measured {
    let l = solver.lattice();
    let ground = solver
        .solve_n(SymmetryPoint::Gamma.wavevector(l.pitch), 1)?
        .remove(0);
    let p = longitudinal_profile(&ground, solver.pattern(), 512);
    let worst = p
        .eta
        .iter()
        .map(|e| ((e + 1.0).norm() - 1.0).abs())
        .fold(0.0_f64, f64::max);
    let (lo, hi) = {
        let (a, b) = (l.dphi * l.fill_factor, l.dphi);
        (a.min(b), a.max(b))
    };
    let inside = lo < p.alpha && p.alpha < hi;
    Ok((
        worst,
        worst <= UNIMODULAR_TOL && inside,
        format!("α = {:.6e} in ({lo:.3e}, {hi:.3e}): {inside}", p.alpha),
    ))
}

fn ratio(cfg: &ExperimentConfig) -> Measured {
    let l = &cfg.lattice;
    let (mp, mm) = m_closed_form(l, &derive_params(l))?;
    let r = consistency_ratio(l, mp, mm, l.n_refr);
    let s = sinc(PI * l.fill_factor.sqrt());
    let want = 1.0 / (1.0 + s * s).sqrt();
    let d = (r - want).abs();
    Ok((
        d,
        d <= RATIO_TOL,
        format!("spread-based / 2M/n² = {r:.10} (1/√(1+s²) = {want:.10})"),
    ))
}

fn convergence(cfg: &ExperimentConfig, solver: &OpwSolver) -> Measured {
    let edges = |s: &OpwSolver| -> Result<Vec<f64>> {
        let t = SymmetryPoint::T.wavevector(s.lattice().pitch);
        s.detunings_at(t, 4)
    };
    let wider = OpwSolver::new(&cfg.lattice, cfg.basis_halfwidth + 2, cfg.n_bands);
    let (a, b) = (edges(solver)?, edges(&wider)?);
    let omega0 = solver.params().omega0;
    let d = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max)
        / omega0;
    Ok((
        d,
        d < CONVERGENCE_TOL,
        format!(
            "lowest T levels, half-width {} vs {}",
            cfg.basis_halfwidth,
            cfg.basis_halfwidth + 2
        ),
    ))
}

/// Runs every check on the configured lattice.
pub fn cmd_validate(cfg: &ExperimentConfig) -> ValidationReport {
    let solver = OpwSolver::from_config(cfg);
    let checks = vec![
        check("fourier_vs_quadrature", true, FOURIER_TOL, fourier(cfg)),
        check("eigh_residuals", true, RESIDUAL_TOL, residuals(&solver)),
        check("t_degeneracy", true, CLUSTER_TOL, t_degeneracy(&solver)),
        check("kp_vs_opw", true, AGREEMENT_TOLERANCE, kp_vs_opw(&solver)),
        check("f_sum_round_trip", true, FSUM_TOL, f_sum(&solver)),
        check("closed_form_vs_opw_mass", true, MASS_TOL, masses(&solver)),
        check("unimodular_eta", true, UNIMODULAR_TOL, unimodular(&solver)),
        check("consistency_ratio", true, RATIO_TOL, ratio(cfg)),
        check(
            "basis_convergence",
            false,
            CONVERGENCE_TOL,
            convergence(cfg, &solver),
        ),
    ];
    ValidationReport {
        lattice: cfg.lattice,
        basis_halfwidth: cfg.basis_halfwidth,
        checks,
    }
}
