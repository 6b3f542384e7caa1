//! `sweep`: closed-form splitting parameters over one lattice parameter.

use std::path::Path;

use clap::ValueEnum;
use czphc_core::config::DPHI_SOFT_LIMIT;
use czphc_core::zeeman::SweepRow;
use czphc_core::LatticeSpec;
use log::warn;
use rayon::prelude::*;

use crate::format::float;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Dphi,
    /// Lattice pitch in µm.
    Pitch,
    Ff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.points == 0 {
            return Err(CliError::Usage("--points must be >= 1".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Usage("sweep bounds must be finite".into()));
        }
        if self.log && (self.from <= 0.0 || self.to <= 0.0) {
            return Err(CliError::Usage("--log needs positive bounds".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.from]);
        }
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if i == 0 {
                    self.from
                } else if i + 1 == self.points {
                    self.to
                } else if self.log {
                    (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + t * (self.to - self.from)
                }
            })
            .collect())
    }
}

/// Validates every lattice of the sweep, then evaluates them in parallel.
pub fn cmd_sweep(base: &LatticeSpec, spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    let lattices = spec
        .values()?
        .into_iter()
        .map(|v| {
            let l = match spec.param {
                SweepParam::Dphi => base.with_dphi(v),
                SweepParam::Pitch => base.with_pitch(v * 1e-6),
                SweepParam::Ff => base.with_fill_factor(v),
            };
            l.validate().map_err(CliError::Config)?;
            if l.dphi == 0.0 {
                return Err(CliError::Usage("Δφ = 0 has no closed-form M±".into()));
            }
            Ok(l)
        })
        .collect::<CliResult<Vec<_>>>()?;
    if lattices.iter().any(|l| l.dphi < 0.0) {
        warn!("negative Δφ: M± are negative, outside the demonstrated parameter set");
    }
    if lattices.iter().any(|l| l.dphi.abs() > DPHI_SOFT_LIMIT) {
        warn!("|Δφ| above {DPHI_SOFT_LIMIT}: weak-contrast formulas lose accuracy");
    }
    lattices
        .par_iter()
        .map(|l| SweepRow::new(l).map_err(CliError::Compute))
        .collect()
}

/// Columns of the sweep table; `ff` is appended so fill-factor sweeps carry
/// their parameter.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "dphi,pitch_um,M_plus,M_minus,M,dwL_over_Omega,dwS_over_Omega,spread_rms_mm,consistency_ratio,ff\n",
    );
    for r in rows {
        let z = &r.result;
        let cols = [
            r.dphi,
            r.pitch_um,
            z.m_plus,
            z.m_minus,
            z.m_total,
            z.delta_omega_l_per_omega,
            z.delta_omega_s_per_omega,
            z.spread_rms * 1e3,
            z.consistency_ratio,
            r.ff,
        ];
        out.push_str(&cols.map(float).join(","));
        out.push('\n');
    }
    out
}

pub fn plotscript(csv: &Path, param: SweepParam) -> String {
    let name = csv
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("sweep.csv");
    let (col, label, log) = match param {
        SweepParam::Dphi => (1, "contrast (rad)", "set logscale xy\n"),
        SweepParam::Pitch => (2, "pitch (um)", "set logscale y\n"),
        SweepParam::Ff => (10, "fill factor", "set logscale y\n"),
    };
    format!(
        "set datafile separator ','\n\
         {log}set xlabel '{label}'\n\
         set ylabel 'splitting / rotation rate'\n\
         set y2label 'rms spread (mm)'\n\
         set y2tics\n\
         plot '{name}' every ::1 using {col}:6 with lines title 'orbital', \\\n\
         \x20    '' every ::1 using {col}:7 with lines title 'spin', \\\n\
         \x20    '' every ::1 using {col}:8 axes x1y2 with lines dt 2 title 'spread'\n"
    )
}
