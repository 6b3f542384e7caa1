//! `split`: Coriolis-Zeeman splittings at T from the k·p matrices and from
//! the closed formulas.

use czphc_core::kp::{kp_model_from_solver, zeeman_splittings_at_t, MSource};
use czphc_core::opw::OpwSolver;
use czphc_core::zeeman::splittings;
use czphc_core::{ExperimentConfig, RotationSpec};
use serde::Serialize;

use crate::format::float;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRow {
    pub omega: f64,
    pub ds_kp: f64,
    pub dl_kp: f64,
    pub ds_formula: f64,
    pub dl_formula: f64,
    pub rel_diff_s: f64,
    pub rel_diff_l: f64,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// One row per rotation rate; the k·p model is built once at rest.
pub fn cmd_split(
    cfg: &ExperimentConfig,
    omegas: &[f64],
    source: MSource,
) -> CliResult<Vec<SplitRow>> {
    if let Some(w) = omegas.iter().find(|w| !w.is_finite()) {
        return Err(CliError::Usage(format!("non-finite rotation rate {w}")));
    }
    let solver = OpwSolver::from_config(cfg);
    let model = kp_model_from_solver(&solver, source).map_err(CliError::Compute)?;
    omegas
        .iter()
        .map(|&omega| {
            let s = zeeman_splittings_at_t(&model, &RotationSpec::new(omega))
                .map_err(CliError::Compute)?;
            let (ds, dl) = splittings(model.m_plus, model.m_minus, model.n_refr, omega);
            Ok(SplitRow {
                omega,
                ds_kp: s.delta_s,
                dl_kp: s.delta_l,
                ds_formula: ds,
                dl_formula: dl,
                rel_diff_s: rel_diff(s.delta_s, ds),
                rel_diff_l: rel_diff(s.delta_l, dl),
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SplitRow]) -> String {
    let mut out = String::from(
        "omega_rad_s,dwS_kp_rad_s,dwL_kp_rad_s,dwS_formula_rad_s,dwL_formula_rad_s,rel_diff_S,rel_diff_L\n",
    );
    for r in rows {
        let cols = [
            r.omega,
            r.ds_kp,
            r.dl_kp,
            r.ds_formula,
            r.dl_formula,
            r.rel_diff_s,
            r.rel_diff_l,
        ];
        out.push_str(&cols.map(float).join(","));
        out.push('\n');
    }
    out
}
