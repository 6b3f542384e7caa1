//! Physical parameters of the patterned cavity and JSON configuration.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::kpath::KPath;

/// Phase contrast above which the perturbative regime is questionable.
pub const DPHI_SOFT_LIMIT: f64 = 0.02;
/// Phase contrast above which a lattice is rejected.
pub const DPHI_HARD_LIMIT: f64 = 0.1;
/// Minimum ratio pitch / cavity length (`pitch * n / lambda`).
pub const MIN_PITCH_OVER_LZ: f64 = 2.0;

pub const DEFAULT_BASIS_HALFWIDTH: usize = 7;
pub const DEFAULT_KPATH: &str = "G:Z:T:G";
pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 40;
pub const DEFAULT_N_BANDS: usize = 8;

/// User-facing parameters of the patterned one-wavelength cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Vacuum wavelength, m.
    pub lambda_vac: f64,
    /// Refractive index inside the cavity.
    pub n_refr: f64,
    /// Lattice period, m.
    pub pitch: f64,
    /// Pixel area over unit-cell area.
    pub fill_factor: f64,
    /// Phase contrast of the mirror pattern.
    pub dphi: f64,
}

impl LatticeSpec {
    pub fn new(
        lambda_vac: f64,
        n_refr: f64,
        pitch: f64,
        fill_factor: f64,
        dphi: f64,
    ) -> Result<Self> {
        let spec = Self {
            lambda_vac,
            n_refr,
            pitch,
            fill_factor,
            dphi,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The reference lattice: 960 nm, n = 3.53, 4 µm pitch,
    /// FF = 0.65, contrast 0.02.
    pub fn reference() -> Self {
        Self {
            lambda_vac: 960e-9,
            n_refr: 3.53,
            pitch: 4e-6,
            fill_factor: 0.65,
            dphi: 0.02,
        }
    }

    pub fn with_dphi(self, dphi: f64) -> Self {
        Self { dphi, ..self }
    }

    pub fn with_pitch(self, pitch: f64) -> Self {
        Self { pitch, ..self }
    }

    pub fn with_fill_factor(self, fill_factor: f64) -> Self {
        Self {
            fill_factor,
            ..self
        }
    }

    /// Checks every invariant; warns when the contrast leaves the
    /// low-contrast regime but is still accepted.
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, value: f64, bound: &str) -> Error {
            Error::Validation {
                field,
                value: value.to_string(),
                bound: bound.to_string(),
            }
        }
        if !(self.lambda_vac.is_finite() && self.lambda_vac > 0.0) {
            return Err(bad("lambda", self.lambda_vac, "lambda > 0"));
        }
        if !(self.pitch.is_finite() && self.pitch > 0.0) {
            return Err(bad("pitch", self.pitch, "pitch > 0"));
        }
        if !(self.n_refr.is_finite() && self.n_refr >= 1.0) {
            return Err(bad("n", self.n_refr, "n >= 1"));
        }
        if !(self.fill_factor > 0.0 && self.fill_factor < 1.0) {
            return Err(bad("ff", self.fill_factor, "0 < ff < 1"));
        }
        if !self.dphi.is_finite() || self.dphi.abs() > DPHI_HARD_LIMIT {
            return Err(bad(
                "dphi",
                self.dphi,
                &format!("|dphi| <= {DPHI_HARD_LIMIT}"),
            ));
        }
        if self.dphi.abs() > DPHI_SOFT_LIMIT {
            warn!(
                "|dphi| = {} exceeds {DPHI_SOFT_LIMIT}; low-contrast approximation is marginal",
                self.dphi
            );
        }
        let ratio = self.pitch * self.n_refr / self.lambda_vac;
        if ratio < MIN_PITCH_OVER_LZ {
            return Err(bad(
                "pitch",
                self.pitch,
                &format!("pitch * n / lambda >= {MIN_PITCH_OVER_LZ} (got {ratio})"),
            ));
        }
        Ok(())
    }

    /// Side of the centered square pixel, `pitch * sqrt(ff)`.
    pub fn pixel_side(&self) -> f64 {
        self.pitch * self.fill_factor.sqrt()
    }
}

/// Constants derived from a [`LatticeSpec`], all SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Longitudinal wavenumber `2π n / λ`, rad/m.
    pub k_z: f64,
    /// Cavity length `λ / n`, m.
    pub l_z: f64,
    /// Paraxial photon mass `n ħ k_z / c`, kg.
    pub m0: f64,
    /// Interband momentum matrix element `ħ π / (√2 Λ)`, kg·m/s.
    pub p_interband: f64,
    /// Carrier angular frequency `c k_z / n`, rad/s.
    pub omega0: f64,
    /// Depth of the optical potential per unit phase, `c / (2 n l_z)`, rad/s.
    pub v_prefactor: f64,
    /// Relative impedance `sqrt(mu / eps)`.
    pub z_impedance: f64,
    pub eps: f64,
    pub mu: f64,
    pub n_refr: f64,
}

impl DerivedParams {
    /// `ħ / (2 m0)`: kinetic coefficient in ω units, m²/s.
    pub fn kinetic_coeff(&self) -> f64 {
        HBAR / (2.0 * self.m0)
    }

    /// Rest term `m0 c² / (n² ħ)`; equals `omega0` identically.
    pub fn rest_frequency(&self) -> f64 {
        self.m0 * C * C / (self.n_refr * self.n_refr * HBAR)
    }
}

pub fn derive_params(lattice: &LatticeSpec) -> DerivedParams {
    let n = lattice.n_refr;
    let k_z = 2.0 * std::f64::consts::PI * n / lattice.lambda_vac;
    let l_z = lattice.lambda_vac / n;
    let m0 = n * HBAR * k_z / C;
    let p_interband = HBAR * std::f64::consts::PI / (std::f64::consts::SQRT_2 * lattice.pitch);
    let omega0 = C * k_z / n;
    let v_prefactor = C / (2.0 * n * l_z);
    // nonmagnetic cavity
    let mu = 1.0;
    let eps = n * n;
    DerivedParams {
        k_z,
        l_z,
        m0,
        p_interband,
        omega0,
        v_prefactor,
        z_impedance: (mu / eps).sqrt(),
        eps,
        mu,
        n_refr: n,
    }
}

/// Rotation about the cavity axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    /// Angular speed Ω, rad/s.
    pub omega_z: f64,
}

impl RotationSpec {
    pub fn new(omega_z: f64) -> Self {
        Self { omega_z }
    }

    pub fn at_rest() -> Self {
        Self { omega_z: 0.0 }
    }

    /// `|Ω| r / c` for a simulation domain of radius `radius`.
    pub fn metric_parameter(&self, radius: f64) -> f64 {
        self.omega_z.abs() * radius / C
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub lattice: LatticeSpec,
    pub rotation: RotationSpec,
    /// Plane-wave cutoff: indices `|m|, |n| <= basis_halfwidth`.
    pub basis_halfwidth: usize,
    pub kpath: KPath,
    /// Number of scalar bands reported per k-point.
    pub n_bands: usize,
}

impl ExperimentConfig {
    pub fn new(lattice: LatticeSpec) -> Self {
        Self {
            lattice,
            rotation: RotationSpec::at_rest(),
            basis_halfwidth: DEFAULT_BASIS_HALFWIDTH,
            kpath: KPath::parse(DEFAULT_KPATH, DEFAULT_SAMPLES_PER_SEGMENT)
                .expect("default k-path is valid"),
            n_bands: DEFAULT_N_BANDS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        if self.basis_halfwidth < 2 {
            return Err(Error::Validation {
                field: "basis_halfwidth",
                value: self.basis_halfwidth.to_string(),
                bound: "basis_halfwidth >= 2".into(),
            });
        }
        let basis = (2 * self.basis_halfwidth + 1).pow(2);
        if self.n_bands == 0 || self.n_bands > basis {
            return Err(Error::Validation {
                field: "n_bands",
                value: self.n_bands.to_string(),
                bound: format!("1 <= n_bands <= {basis}"),
            });
        }
        Ok(())
    }
}

fn default_halfwidth() -> usize {
    DEFAULT_BASIS_HALFWIDTH
}

fn default_kpath() -> String {
    DEFAULT_KPATH.to_string()
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES_PER_SEGMENT
}

/// On-disk schema. Lengths are in the units named by the keys.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lambda_nm: f64,
    n: f64,
    pitch_um: f64,
    ff: f64,
    dphi: f64,
    #[serde(default)]
    omega_rad_s: f64,
    #[serde(default = "default_halfwidth")]
    basis_halfwidth: usize,
    #[serde(default = "default_kpath")]
    kpath: String,
    #[serde(default = "default_samples")]
    samples_per_segment: usize,
}

/// Parses and validates a JSON configuration document.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let raw: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let lattice = LatticeSpec {
        lambda_vac: raw.lambda_nm * 1e-9,
        n_refr: raw.n,
        pitch: raw.pitch_um * 1e-6,
        fill_factor: raw.ff,
        dphi: raw.dphi,
    };
    if !raw.omega_rad_s.is_finite() {
        return Err(Error::Validation {
            field: "omega_rad_s",
            value: raw.omega_rad_s.to_string(),
            bound: "finite".into(),
        });
    }
    let cfg = ExperimentConfig {
        lattice,
        rotation: RotationSpec::new(raw.omega_rad_s),
        basis_halfwidth: raw.basis_halfwidth,
        kpath: KPath::parse(&raw.kpath, raw.samples_per_segment)?,
        n_bands: DEFAULT_N_BANDS,
    };
    cfg.validate()?;
    Ok(cfg)
}
