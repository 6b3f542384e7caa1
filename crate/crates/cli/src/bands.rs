//! `bands`: plane-wave and k·p band structures along a k-path.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

use clap::ValueEnum;
use czphc_core::kp::{kp_bands, kp_model_from_solver, KpModel, KpSpectrum, MSource};
use czphc_core::kpath::{KPoint, SymmetryPoint};
use czphc_core::opw::{solve_bands, BandStructure, OpwSolver, SPIN_DEGENERACY};
use czphc_core::{ExperimentConfig, RotationSpec};

use crate::format::{float, ghz};
use crate::{write_file, CliError, CliResult};

/// Radius around T, in units of `π/Λ`, inside which the two models are
/// compared.
pub const AGREEMENT_RADIUS: f64 = 0.25;
/// Allowed deviation as a fraction of the eight-band span at T.
pub const AGREEMENT_TOLERANCE: f64 = 0.05;
/// Number of k·p bands (four scalar bands times two helicities).
const KP_BANDS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandModel {
    Opw,
    Kp,
    Both,
}

#[derive(Debug, Clone)]
pub struct BandsOutput {
    pub opw_csv: Option<String>,
    pub kp_csv: Option<String>,
    /// Per k-point, per band difference; only with both models.
    pub diff_csv: Option<String>,
    /// Largest `|Δω| / span` among k-points inside the k·p window.
    pub max_rel_diff_in_window: Option<f64>,
}

const BAND_HEADER: &str =
    "k_index,path_pos,kx,ky,band,degeneracy,omega_rad_s,detuning_GHz,rep_label";

fn k_rel(k: [f64; 2], pitch: f64) -> [f64; 2] {
    let t = SymmetryPoint::T.wavevector(pitch);
    [k[0] - t[0], k[1] - t[1]]
}

fn opw_csv(bs: &BandStructure) -> String {
    let mut out = format!("{BAND_HEADER}\n");
    for (i, (kp, states)) in bs.kpoints.iter().zip(&bs.bands).enumerate() {
        for s in states {
            out.push_str(&format!(
                "{i},{},{},{},{},{},{},{},{}\n",
                float(kp.path_pos),
                float(kp.k[0]),
                float(kp.k[1]),
                s.band,
                s.degeneracy,
                float(s.omega),
                ghz(s.detuning),
                s.rep_label.map_or("", |r| r.label()),
            ));
        }
    }
    out
}

fn kp_csv(kpoints: &[KPoint], spec: &KpSpectrum) -> String {
    let mut out = format!("{BAND_HEADER},block\n");
    for (i, (kp, p)) in kpoints.iter().zip(spec).enumerate() {
        let label = if p.within_window { "" } else { "extrap" };
        for (b, s) in p.states.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{},{},{b},1,{},{},{label},{}\n",
                float(kp.path_pos),
                float(kp.k[0]),
                float(kp.k[1]),
                float(s.omega),
                ghz(s.detuning),
                s.block,
            ));
        }
    }
    out
}

/// Lowest four scalar bands, each repeated for both helicities.
fn spin_doubled(detunings: impl IntoIterator<Item = f64>) -> Vec<f64> {
    detunings
        .into_iter()
        .take(KP_BANDS / SPIN_DEGENERACY)
        .flat_map(|d| [d; SPIN_DEGENERACY])
        .collect()
}

fn diff_csv(
    kpoints: &[KPoint],
    bs: &BandStructure,
    spec: &KpSpectrum,
    span: f64,
) -> (String, Option<f64>) {
    let mut out = String::from(
        "k_index,path_pos,kx,ky,band,omega_opw_rad_s,omega_kp_rad_s,diff_rad_s,diff_over_span,within_window\n",
    );
    let mut worst: Option<f64> = None;
    for (i, ((kp, states), p)) in kpoints.iter().zip(&bs.bands).zip(spec).enumerate() {
        let opw = spin_doubled(states.iter().map(|s| s.detuning));
        let omega0 = states[0].omega - states[0].detuning;
        for (b, (o, k)) in opw.iter().zip(&p.states).enumerate() {
            let d = k.detuning - o;
            if p.within_window {
                worst = Some(worst.unwrap_or(0.0).max(d.abs() / span));
            }
            out.push_str(&format!(
                "{i},{},{},{},{b},{},{},{},{},{}\n",
                float(kp.path_pos),
                float(kp.k[0]),
                float(kp.k[1]),
                float(omega0 + o),
                float(k.omega),
                float(d),
                float(d / span),
                u8::from(p.within_window),
            ));
        }
    }
    (out, worst)
}

/// Computes the requested band structures as CSV text.
pub fn cmd_bands(
    cfg: &ExperimentConfig,
    model: BandModel,
    source: MSource,
) -> CliResult<BandsOutput> {
    let pitch = cfg.lattice.pitch;
    let need_opw = model != BandModel::Kp;
    let need_kp = model != BandModel::Opw;
    if need_kp && cfg.n_bands < KP_BANDS / SPIN_DEGENERACY {
        return Err(CliError::Usage(format!(
            "k·p comparison needs at least {} scalar bands",
            KP_BANDS / SPIN_DEGENERACY
        )));
    }

    let bs = if need_opw {
        Some(solve_bands(cfg).map_err(CliError::Compute)?)
    } else {
        None
    };
    let kpoints = cfg.kpath.sample(pitch);

    let kp = if need_kp {
        let solver = OpwSolver::from_config(cfg);
        let m = kp_model_from_solver(&solver, source).map_err(CliError::Compute)?;
        let rel: Vec<[f64; 2]> = kpoints.iter().map(|p| k_rel(p.k, pitch)).collect();
        let spec = kp_bands(&m, &rel, &RotationSpec::at_rest()).map_err(CliError::Compute)?;
        Some((m, spec))
    } else {
        None
    };

    let (diff, worst) = match (&bs, &kp) {
        (Some(bs), Some((m, spec))) => {
            let (csv, w) = diff_csv(&kpoints, bs, spec, m.edges.span());
            (Some(csv), w)
        }
        _ => (None, None),
    };
    Ok(BandsOutput {
        opw_csv: bs.as_ref().map(opw_csv),
        kp_csv: kp.as_ref().map(|(_, s)| kp_csv(&kpoints, s)),
        diff_csv: diff,
        max_rel_diff_in_window: worst,
    })
}

/// `<stem>_<suffix>.<ext>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("bands");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn plotscript(csv: &Path, with_block: bool) -> String {
    let name = csv
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("bands.csv");
    let style = if with_block {
        "lc variable"
    } else {
        "lc rgb 'black'"
    };
    let using = if with_block { "2:8:10" } else { "2:8" };
    format!(
        "set datafile separator ','\n\
         set key off\n\
         set xlabel 'path position (rad/m)'\n\
         set ylabel 'detuning (GHz)'\n\
         plot '{name}' every ::1 using {using} with points pt 7 ps 0.4 {style}\n"
    )
}

/// Writes the CSVs of `out`: the single model to `path` (or stdout), both
/// models to `<stem>_opw`, `<stem>_kp` and `<stem>_diff` files.
pub fn write_outputs(
    out: &BandsOutput,
    path: Option<&Path>,
    model: BandModel,
    plot: bool,
) -> CliResult<()> {
    let need_path = model == BandModel::Both || plot;
    if need_path && path.is_none() {
        return Err(CliError::Usage(
            "--output is required for --model both and --emit-plotscript".into(),
        ));
    }
    // (file, contents, plot style: Some(with block colouring) or no plot)
    let files: Vec<(std::path::PathBuf, &String, Option<bool>)> = match model {
        BandModel::Both => {
            let p = path.expect("checked above");
            vec![
                (
                    sibling(p, "opw"),
                    out.opw_csv.as_ref().expect("opw computed"),
                    Some(false),
                ),
                (
                    sibling(p, "kp"),
                    out.kp_csv.as_ref().expect("kp computed"),
                    Some(true),
                ),
                (
                    sibling(p, "diff"),
                    out.diff_csv.as_ref().expect("diff computed"),
                    None,
                ),
            ]
        }
        _ => {
            let csv = out
                .opw_csv
                .as_ref()
                .or(out.kp_csv.as_ref())
                .expect("one model");
            match path {
                Some(p) => vec![(p.to_path_buf(), csv, Some(model == BandModel::Kp))],
                None => {
                    print!("{csv}");
                    return Ok(());
                }
            }
        }
    };
    for (p, csv, style) in &files {
        write_file(p, csv)?;
        if let (true, Some(block)) = (plot, style) {
            write_file(&p.with_extension("gp"), &plotscript(p, *block))?;
        }
    }
    Ok(())
}

/// Largest deviation between every k·p frequency and its nearest
/// spin-doubled plane-wave frequency, as a fraction of the eight-band span
/// at T, over `|k - T| <= radius·π/Λ` along T→Z and T→Γ.
pub fn kp_opw_agreement(
    solver: &OpwSolver,
    model: &KpModel,
    radius: f64,
    samples: usize,
) -> czphc_core::Result<f64> {
    let pitch = solver.lattice().pitch;
    let t = SymmetryPoint::T.wavevector(pitch);
    let span = model.edges.span();
    let mut worst = 0.0_f64;
    for dir in [[0.0, -1.0], [-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]] {
        for i in 0..=samples {
            let r = radius * PI / pitch * i as f64 / samples as f64;
            let rel = [r * dir[0], r * dir[1]];
            let opw = spin_doubled(solver.detunings_at([t[0] + rel[0], t[1] + rel[1]], KP_BANDS)?);
            let kp = kp_bands(model, &[rel], &RotationSpec::at_rest())?;
            for s in &kp[0].states {
                let d = opw
                    .iter()
                    .map(|o| (o - s.detuning).abs())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d / span);
            }
        }
    }
    Ok(worst)
}
