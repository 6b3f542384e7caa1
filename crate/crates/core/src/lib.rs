//! Band structure and Coriolis-Zeeman splitting of a square-lattice photonic
//! crystal formed by a Fabry-Pérot microcavity with a phase-patterned mirror.
//!
//! The crate is organized bottom-up:
//!
//! * [`constants`], [`config`], [`linalg`]: SI constants, physical parameters,
//!   configuration ingestion and the dense Hermitian eigensolver.
//! * [`lattice`]: the mirror phase pattern, its Fourier series and the
//!   reciprocal-lattice basis.
//! * [`opw`]: the plane-wave solver for the non-rotating crystal, T-point
//!   symmetry classification, effective masses, the longitudinal Bloch factor
//!   and paraxial field reconstruction.
//! * [`kp`]: the 8×8 k·p Hamiltonian around the T point, including rotation.
//! * [`zeeman`]: closed-form splitting quantities and the effective index of a
//!   rotating cavity.

pub mod config;
pub mod constants;
pub mod error;
pub mod kp;
pub mod kpath;
pub mod lattice;
pub mod linalg;
pub mod opw;
pub mod zeeman;

pub use config::{
    derive_params, load_config, DerivedParams, ExperimentConfig, LatticeSpec, RotationSpec,
};
pub use error::{Error, Result};
pub use linalg::{eigh, Eigh, HermitianMatrix};

pub use num_complex::Complex64;
