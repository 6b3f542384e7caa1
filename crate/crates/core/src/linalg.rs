//! Dense Hermitian matrices and their eigendecomposition.
//!
//! The decomposition is delegated to faer's self-adjoint eigensolver
//! (tridiagonalization followed by implicit QR). Real symmetric
//! input, which is what the plane-wave solver produces at rest, takes a
//! real-arithmetic path. Eigenpairs are returned in ascending order.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{
    self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors, SelfAdjointEvdParams,
};
use faer::traits::ComplexField;
use faer::{auto, Mat, Par, Spec};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on `|h_ij - conj(h_ji)|` for accepting a matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    /// Row-major.
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from row-major entries, checking Hermiticity.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape {
                dim,
                len: entries.len(),
            });
        }
        let m = Self { dim, entries };
        m.check_hermitian()?;
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    /// Fills the upper triangle from `f` and mirrors it, so the result is
    /// Hermitian by construction.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            let d = f(i, i);
            entries[i * dim + i] = Complex64::new(d.re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v.conj();
            }
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_upper(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `Re <v|H|v>` for a unit-norm `v`.
    pub fn rayleigh_quotient(&self, v: &[Complex64]) -> f64 {
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(hv, x)| (x.conj() * hv).re)
            .sum()
    }

    fn check_hermitian(&self) -> Result<()> {
        let scale = self
            .entries
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..self.dim {
            for j in i..self.dim {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                if dev > HERMITICITY_TOL * scale {
                    return Err(Error::NonHermitian {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector belonging to `values[j]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigh {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn eigh(h: &HermitianMatrix) -> Result<Eigh> {
    let n = h.dim;
    if n == 0 {
        return Ok(Eigh {
            values: vec![],
            vectors: vec![],
        });
    }
    let (values, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = if h.is_real() {
        let (s, u) = qr_evd(Mat::<f64>::from_fn(n, n, |i, j| h.get(i, j).re), n)?;
        let vecs = (0..n)
            .map(|j| (0..n).map(|i| Complex64::new(u[(i, j)], 0.0)).collect())
            .collect();
        (s, vecs)
    } else {
        let (s, u) = qr_evd(Mat::<Complex64>::from_fn(n, n, |i, j| h.get(i, j)), n)?;
        let vecs = (0..n)
            .map(|j| (0..n).map(|i| u[(i, j)]).collect())
            .collect();
        (s.iter().map(|z| z.re).collect(), vecs)
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence { dim: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut vectors = vectors;
    Ok(Eigh {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order
            .iter()
            .map(|&i| std::mem::take(&mut vectors[i]))
            .collect(),
    })
}

/// Tridiagonal QR at every size. faer switches to divide and conquer above
/// 128 rows by default, which loses orthogonality inside the near-degenerate
/// clusters these Hamiltonians have.
fn qr_evd<T: ComplexField>(a: Mat<T>, n: usize) -> Result<(Vec<T>, Mat<T>)> {
    let params = Spec::new(SelfAdjointEvdParams {
        recursion_threshold: usize::MAX,
        ..auto!(T)
    });
    let par = Par::Seq;
    let mut s = Diag::<T>::zeros(n);
    let mut u = Mat::<T>::zeros(n, n);
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<T>(
        n,
        ComputeEigenvectors::Yes,
        par,
        params,
    ));
    self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut buf),
        params,
    )
    .map_err(|_| Error::Convergence { dim: n })?;
    Ok((s.column_vector().iter().cloned().collect(), u))
}
