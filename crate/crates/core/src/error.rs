use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {value} (requires {bound})")]
    Validation {
        field: &'static str,
        value: String,
        bound: String,
    },

    #[error("invalid k-path: {0}")]
    KPath(String),

    #[error("matrix is not Hermitian: |h[{row}][{col}] - conj(h[{col}][{row}])| = {deviation:e}")]
    NonHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix has {len} entries, expected {dim}x{dim}")]
    Shape { dim: usize, len: usize },

    #[error("eigensolver failed to converge for a {dim}x{dim} matrix")]
    Convergence { dim: usize },

    #[error("eigensolver failed at k = ({kx:e}, {ky:e}) rad/m: {source}")]
    AtKPoint {
        kx: f64,
        ky: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("required T-point representation {missing} not found among the lowest bands (found: {found})")]
    MissingRepresentation { missing: String, found: String },

    #[error("band edge ordering violated: {0}")]
    EdgeOrdering(String),

    #[error("closed-form M± is singular for dphi = 0 (empty lattice)")]
    EmptyLattice,

    #[error("band {band} is degenerate within the finite-difference stencil; use a smaller step or the k·p route")]
    DegenerateStencil { band: usize },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}
