//! End-to-end runs of the `czphc` binary.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use czphc_core::constants::{C, RAD_S_TO_GHZ};
use tempfile::TempDir;

const REFERENCE: &str = r#"{"lambda_nm":960,"n":3.53,"pitch_um":4,"ff":0.65,"dphi":0.02}"#;
const WEAK: &str = r#"{"lambda_nm":960,"n":3.53,"pitch_um":4,"ff":0.65,"dphi":1e-4}"#;

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn czphc(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_czphc"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV as header-indexed columns.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (h, rows) = table(text);
    let i = h
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn bands_sample_count_and_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", REFERENCE);
    let o = czphc(&cfg, &["bands", "--kpath", "G:Z", "--samples", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let k = column(&text, "k_index");
    assert_eq!(k.len(), 11 * 8);
    assert_eq!(k.last().copied(), Some(10.0));
    assert!(text.starts_with(
        "k_index,path_pos,kx,ky,band,degeneracy,omega_rad_s,detuning_GHz,rep_label\n"
    ));
}

#[test]
fn both_models_write_three_tables() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", REFERENCE);
    let out = dir.path().join("b.csv");
    let o = czphc(
        &cfg,
        &[
            "bands",
            "--kpath",
            "Z:T:G",
            "--samples",
            "8",
            "--model",
            "both",
            "--emit-plotscript",
            "-o",
        ],
    );
    // -o without a value is a usage error
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_czphc"))
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ])
        .args([
            "bands",
            "--kpath",
            "Z:T:G",
            "--samples",
            "8",
            "--model",
            "both",
            "--emit-plotscript",
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["b_opw.csv", "b_kp.csv", "b_diff.csv", "b_opw.gp", "b_kp.gp"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let diff = fs::read_to_string(dir.path().join("b_diff.csv")).unwrap();
    let rel = column(&diff, "diff_over_span");
    let inside = column(&diff, "within_window");
    let worst = rel
        .iter()
        .zip(&inside)
        .filter(|(_, w)| **w == 1.0)
        .map(|(r, _)| r.abs())
        .fold(0.0_f64, f64::max);
    assert!(worst < 0.05, "{worst}");
    let kp = fs::read_to_string(dir.path().join("b_kp.csv")).unwrap();
    assert!(kp.contains(",extrap,"));
}

#[test]
fn empty_lattice_gives_folded_free_bands() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "e.json",
        r#"{"lambda_nm":960,"n":3.53,"pitch_um":4,"ff":0.65,"dphi":0,"basis_halfwidth":3}"#,
    );
    let o = czphc(&cfg, &["bands", "--kpath", "G:Z:T", "--samples", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (kx, ky, det) = (
        column(&text, "kx"),
        column(&text, "ky"),
        column(&text, "detuning_GHz"),
    );
    // ħ|k+G|²/(2 m0) with m0 = n ħ k_z / c, k_z = 2π n / λ
    let (lambda, n, pitch) = (960e-9, 3.53, 4e-6);
    let coeff = C * lambda / (4.0 * PI * n * n);
    let b = 2.0 * PI / pitch;
    for (row, chunk) in det.chunks(8).enumerate() {
        let (x, y) = (kx[row * 8], ky[row * 8]);
        let mut free: Vec<f64> = (-4..=4)
            .flat_map(|i| (-4..=4).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (gx, gy) = (x + i as f64 * b, y + j as f64 * b);
                coeff * (gx * gx + gy * gy) * RAD_S_TO_GHZ
            })
            .collect();
        free.sort_by(f64::total_cmp);
        for (got, want) in chunk.iter().zip(&free) {
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "{got} vs {want}"
            );
        }
    }
}

#[test]
fn split_zero_rate_and_sign_flip() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", WEAK);
    let o = czphc(&cfg, &["split", "--omega-list", "0,100,-100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let ds = column(&text, "dwS_kp_rad_s");
    let dl = column(&text, "dwL_kp_rad_s");
    assert_eq!((ds[0], dl[0]), (0.0, 0.0));
    assert_eq!(ds[1], -ds[2]);
    assert_eq!(dl[1], -dl[2]);
    assert!((ds[1] - 200.0 / (3.53 * 3.53)).abs() < 1e-10);
    // Δω_L = 2MΩ/n² with M ≈ 1.04e3
    assert!((dl[1] / 1.673e4 - 1.0).abs() < 2e-3, "{}", dl[1]);
}

#[test]
fn dphi_sweep_scales_inversely() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", WEAK);
    let o = czphc(
        &cfg,
        &[
            "sweep", "--param", "dphi", "--from", "1e-5", "--to", "1e-2", "--points", "7", "--log",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (x, y) = (column(&text, "dphi"), column(&text, "dwL_over_Omega"));
    assert_eq!(x[0], 1e-5);
    for w in x.iter().zip(&y).collect::<Vec<_>>().windows(2) {
        let slope = (w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln());
        assert!((slope + 1.0).abs() < 1e-6, "{slope}");
    }
}

#[test]
fn pitch_and_fill_factor_sweeps() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", WEAK);
    let o = czphc(
        &cfg,
        &[
            "sweep", "--param", "pitch", "--from", "4", "--to", "6", "--points", "2",
        ],
    );
    let y = column(&stdout(&o), "dwL_over_Omega");
    assert!(y[1] < y[0]);

    // s = sinc(π√FF) falls over this range, so M-/M+ = (1+s)/(1-s) falls
    let o = czphc(
        &cfg,
        &[
            "sweep", "--param", "ff", "--from", "0.3", "--to", "0.9", "--points", "13",
        ],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let ff = column(&text, "ff");
    assert_eq!(ff.len(), 13);
    assert!(ff.windows(2).all(|w| w[1] > w[0]));
    let (mp, mm) = (column(&text, "M_plus"), column(&text, "M_minus"));
    let ratio: Vec<f64> = mm.iter().zip(&mp).map(|(a, b)| a / b).collect();
    assert!(ratio.windows(2).all(|w| w[1] < w[0]), "{ratio:?}");

    let o = czphc(
        &cfg,
        &[
            "sweep", "--param", "ff", "--from", "0.5", "--to", "1.5", "--points", "3",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("report.json");
    let good = write_config(&dir, "good.json", REFERENCE);
    let o = czphc(&good, &["validate", "-o", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 9);

    let coarse = write_config(
        &dir,
        "coarse.json",
        r#"{"lambda_nm":960,"n":3.53,"pitch_um":4,"ff":0.65,"dphi":0.02,"basis_halfwidth":2}"#,
    );
    let o = czphc(&coarse, &["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("WARN  basis_convergence"));

    let empty = write_config(
        &dir,
        "empty.json",
        r#"{"lambda_nm":960,"n":3.53,"pitch_um":4,"ff":0.65,"dphi":0}"#,
    );
    assert_eq!(czphc(&empty, &["validate"]).status.code(), Some(1));

    let corrupt = write_config(&dir, "bad.json", r#"{"lambda_nm":960,"n":3.53,"#);
    assert_eq!(czphc(&corrupt, &["validate"]).status.code(), Some(2));
    let unknown = write_config(
        &dir,
        "unknown.json",
        &REFERENCE.replace("}", r#","shape":"disk"}"#),
    );
    assert_eq!(czphc(&unknown, &["validate"]).status.code(), Some(2));
    assert_eq!(
        czphc(&dir.path().join("missing.json"), &["validate"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", REFERENCE);
    let bad = dir.path().join("no/such/dir/out.csv");
    let o = czphc(&cfg, &["split", "-o", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dump_fourier_mean_is_contrast_times_fill() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", REFERENCE);
    let o = czphc(&cfg, &["dump-fourier", "--halfwidth", "3"]);
    let text = stdout(&o);
    let (_, rows) = table(&text);
    assert_eq!(rows.len(), 49);
    let mean = rows
        .iter()
        .find(|r| r[0] == "0" && r[1] == "0")
        .map(|r| r[2].parse::<f64>().unwrap())
        .unwrap();
    assert!((mean - 0.02 * 0.65).abs() < 1e-17);
}

#[test]
fn runs_are_deterministic_and_leave_config_untouched() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.json", REFERENCE);
    let args = ["bands", "--kpath", "Z:T", "--samples", "6", "--model", "kp"];
    let a = czphc(&cfg, &args);
    let b = czphc(
        &cfg,
        &[
            "--threads",
            "1",
            "bands",
            "--kpath",
            "Z:T",
            "--samples",
            "6",
            "--model",
            "kp",
        ],
    );
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read_to_string(&cfg).unwrap(), REFERENCE);
}
