//! C4v classification of the scalar states at the zone corner T.
//!
//! In the empty lattice the lowest T level is spanned by the four plane
//! waves with `k + G = (±π/Λ, ±π/Λ)`. Their symmetrized combinations are
//!
//! | label    | signs on `(sx, sy)` | lowest Taylor term |
//! |----------|---------------------|--------------------|
//! | T1 (S)   | `+1`                | cos·cos            |
//! | T5 (X,Y) | `sx` and `sy`       | sin·cos, cos·sin   |
//! | T4 (XY)  | `sx·sy`             | sin·sin            |
//!
//! A solver state is labelled by the combination that carries most of its
//! weight. With photon spin (itself T5) the scalar levels map onto the
//! vector representations `T1⊗T5 = T5`, `T5⊗T5 = T1⊕T2⊕T3⊕T4` and
//! `T4⊗T5 = T5'`.

use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use super::{degenerate_groups, BlochState};
use crate::error::{Error, Result};

/// A state is labelled only if this fraction of it lies in the T-point
/// plane-wave manifold.
pub const MIN_PROJECTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarRep {
    /// T1, fully symmetric.
    S,
    /// T5, the degenerate x-odd / y-odd pair.
    XYPair,
    /// T4, odd under both mirrors.
    XY,
    /// The unsplit four-wave level of the empty lattice.
    FourFold,
    Unclassified,
}

impl ScalarRep {
    pub fn label(self) -> &'static str {
        match self {
            Self::S => "T1(S)",
            Self::XYPair => "T5(X,Y)",
            Self::XY => "T4(XY)",
            Self::FourFold => "T1+T4+T5",
            Self::Unclassified => "unclassified",
        }
    }

    /// Vector (spin-doubled) representation of the band edge.
    pub fn vector_label(self) -> &'static str {
        match self {
            Self::S => "T5",
            Self::XYPair => "T1-T4",
            Self::XY => "T5'",
            Self::FourFold => "T1-T5,T5'",
            Self::Unclassified => "?",
        }
    }
}

impl fmt::Display for ScalarRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One degenerate group of T states and its label.
#[derive(Debug, Clone, PartialEq)]
pub struct TGroup {
    pub bands: Range<usize>,
    pub rep: ScalarRep,
    /// Weight of the group inside the four-wave manifold, averaged over
    /// its members.
    pub projection: f64,
}

/// The four T-point waves: basis indices and the signs of `k + G`.
struct CornerWaves {
    index: [usize; 4],
    sx: [f64; 4],
    sy: [f64; 4],
}

impl CornerWaves {
    fn find(state: &BlochState) -> Option<Self> {
        let k = state.k_perp;
        let mut q: Vec<(usize, f64)> = state
            .basis
            .iter()
            .enumerate()
            .map(|(i, g)| (i, (k[0] + g.gx).powi(2) + (k[1] + g.gy).powi(2)))
            .collect();
        q.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        if q.len() < 4 {
            return None;
        }
        let mut index = [0; 4];
        let mut sx = [0.0; 4];
        let mut sy = [0.0; 4];
        for (slot, &(i, _)) in q[..4].iter().enumerate() {
            let g = &state.basis[i];
            index[slot] = i;
            sx[slot] = (k[0] + g.gx).signum();
            sy[slot] = (k[1] + g.gy).signum();
        }
        Some(Self { index, sx, sy })
    }

    fn weights(&self, rep: Combo) -> [f64; 4] {
        std::array::from_fn(|i| {
            0.5 * match rep {
                Combo::S => 1.0,
                Combo::X => self.sx[i],
                Combo::Y => self.sy[i],
                Combo::XY => self.sx[i] * self.sy[i],
            }
        })
    }

    /// `<combo | v>`.
    fn overlap(&self, rep: Combo, v: &[Complex64]) -> Complex64 {
        self.weights(rep)
            .iter()
            .zip(&self.index)
            .map(|(w, &i)| v[i] * *w)
            .sum()
    }

    /// Projection of the combination onto `span(vs)`, expanded in the full basis.
    fn project(&self, rep: Combo, vs: &[&[Complex64]]) -> Vec<Complex64> {
        let dim = vs[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for v in vs {
            let c = self.overlap(rep, v).conj();
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += x * c;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Combo {
    S,
    X,
    Y,
    XY,
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Rotates `v` by a global phase so that `<combo|v>` is real and positive.
fn fix_phase(v: &mut [Complex64], overlap: Complex64) {
    if overlap.norm() > 0.0 {
        let ph = overlap.conj() / overlap.norm();
        v.iter_mut().for_each(|x| *x *= ph);
    }
}

/// Labels the states at T by C4v representation.
///
/// `states` must be ascending eigenstates at `k = (π/Λ, π/Λ)`. Labels are
/// written into `rep_label`; singlets get a fixed gauge and each degenerate
/// pair is replaced by its projections onto the x-odd and y-odd
/// combinations, so downstream quantities do not depend on the basis the
/// eigensolver happened to return.
pub fn classify_t_states(states: &mut [BlochState], tol: f64) -> Vec<TGroup> {
    let Some(first) = states.first() else {
        return Vec::new();
    };
    let Some(waves) = CornerWaves::find(first) else {
        return Vec::new();
    };
    let values: Vec<f64> = states.iter().map(|s| s.detuning).collect();
    let mut groups = Vec::new();
    for range in degenerate_groups(&values, tol) {
        let group = match range.len() {
            1 => {
                let st = &mut states[range.start];
                let weights: Vec<(Combo, f64)> = [Combo::S, Combo::X, Combo::Y, Combo::XY]
                    .into_iter()
                    .map(|c| (c, waves.overlap(c, &st.coefficients).norm_sqr()))
                    .collect();
                let (best, w) =
                    weights
                        .iter()
                        .copied()
                        .fold((Combo::S, -1.0), |a, b| if b.1 > a.1 { b } else { a });
                let rep = match best {
                    _ if w < MIN_PROJECTION => ScalarRep::Unclassified,
                    Combo::S => ScalarRep::S,
                    Combo::XY => ScalarRep::XY,
                    // an isolated X or Y state would break C4v
                    Combo::X | Combo::Y => ScalarRep::Unclassified,
                };
                let ov = waves.overlap(best, &st.coefficients);
                fix_phase(&mut st.coefficients, ov);
                TGroup {
                    bands: range.clone(),
                    rep,
                    projection: w,
                }
            }
            2 => {
                let (a, b) = (range.start, range.start + 1);
                let px: f64 = [a, b]
                    .iter()
                    .map(|&i| waves.overlap(Combo::X, &states[i].coefficients).norm_sqr())
                    .sum();
                let py: f64 = [a, b]
                    .iter()
                    .map(|&i| waves.overlap(Combo::Y, &states[i].coefficients).norm_sqr())
                    .sum();
                let projection = 0.5 * (px + py);
                let rep = if projection >= MIN_PROJECTION {
                    ScalarRep::XYPair
                } else {
                    ScalarRep::Unclassified
                };
                if rep == ScalarRep::XYPair {
                    let span = [&states[a].coefficients[..], &states[b].coefficients[..]];
                    let mut x = waves.project(Combo::X, &span);
                    let mut y = waves.project(Combo::Y, &span);
                    normalize(&mut x);
                    let xy: Complex64 = x.iter().zip(&y).map(|(p, q)| p.conj() * q).sum();
                    for (yi, xi) in y.iter_mut().zip(&x) {
                        *yi -= xi * xy;
                    }
                    normalize(&mut y);
                    states[a].coefficients = x;
                    states[b].coefficients = y;
                }
                TGroup {
                    bands: range.clone(),
                    rep,
                    projection,
                }
            }
            4 => {
                let projection = range
                    .clone()
                    .map(|i| {
                        [Combo::S, Combo::X, Combo::Y, Combo::XY]
                            .into_iter()
                            .map(|c| waves.overlap(c, &states[i].coefficients).norm_sqr())
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    / 4.0;
                TGroup {
                    bands: range.clone(),
                    rep: if projection >= MIN_PROJECTION {
                        ScalarRep::FourFold
                    } else {
                        ScalarRep::Unclassified
                    },
                    projection,
                }
            }
            _ => TGroup {
                bands: range.clone(),
                rep: ScalarRep::Unclassified,
                projection: 0.0,
            },
        };
        for st in &mut states[group.bands.clone()] {
            st.rep_label = Some(group.rep);
        }
        groups.push(group);
    }
    groups
}

/// Band-edge detunings (relative to `omega0`) of the k·p manifold at T.
///
/// Scalar edges map onto vector edges as `ω_T5 = S`, `ω_T1 = (X,Y)` and
/// `ω_T5' = XY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandEdges {
    pub omega0: f64,
    /// S-like edge, vector T5.
    pub t5: f64,
    /// (X,Y)-like edge, vector T1-T4.
    pub t1: f64,
    /// XY-like edge, vector T5'.
    pub t5p: f64,
}

impl BandEdges {
    pub fn omega_t5(&self) -> f64 {
        self.omega0 + self.t5
    }

    pub fn omega_t1(&self) -> f64 {
        self.omega0 + self.t1
    }

    pub fn omega_t5p(&self) -> f64 {
        self.omega0 + self.t5p
    }

    /// Total spread `ω_T5' - ω_T5` of the manifold.
    pub fn span(&self) -> f64 {
        self.t5p - self.t5
    }
}

/// Reads the three k·p band edges off labelled T states.
pub fn band_edges(states: &[BlochState], omega0: f64) -> Result<BandEdges> {
    let find = |rep: ScalarRep| {
        states
            .iter()
            .find(|s| s.rep_label == Some(rep) || s.rep_label == Some(ScalarRep::FourFold))
            .map(|s| s.detuning)
    };
    let missing = |rep: ScalarRep| Error::MissingRepresentation {
        missing: rep.label().to_string(),
        found: states
            .iter()
            .map(|s| s.rep_label.map_or("-", ScalarRep::label))
            .collect::<Vec<_>>()
            .join(", "),
    };
    Ok(BandEdges {
        omega0,
        t5: find(ScalarRep::S).ok_or_else(|| missing(ScalarRep::S))?,
        t1: find(ScalarRep::XYPair).ok_or_else(|| missing(ScalarRep::XYPair))?,
        t5p: find(ScalarRep::XY).ok_or_else(|| missing(ScalarRep::XY))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::LatticeSpec;
    use crate::kpath::SymmetryPoint;
    use crate::opw::OpwSolver;

    fn t_states(dphi: f64, hw: usize) -> (OpwSolver, Vec<BlochState>) {
        let s = OpwSolver::new(&LatticeSpec::reference().with_dphi(dphi), hw, 8);
        let t = SymmetryPoint::T.wavevector(s.lattice().pitch);
        let st = s.solve_at(t).unwrap();
        (s, st)
    }

    /// Empty-lattice state built from explicit corner-wave signs.
    fn corner_state(template: &BlochState, f: impl Fn(f64, f64) -> f64) -> BlochState {
        let mut st = template.clone();
        let k = st.k_perp;
        st.coefficients = st
            .basis
            .iter()
            .map(|g| {
                let (qx, qy) = (k[0] + g.gx, k[1] + g.gy);
                let corner = (qx.abs() - k[0]).abs() < 1.0 && (qy.abs() - k[1]).abs() < 1.0;
                if corner {
                    Complex64::new(0.5 * f(qx.signum(), qy.signum()), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        st
    }

    #[test]
    fn symmetric_combinations_are_labelled() {
        let (_, st) = t_states(0.0, 3);
        let mut s = vec![corner_state(&st[0], |_, _| 1.0)];
        classify_t_states(&mut s, 1.0);
        assert_eq!(s[0].rep_label, Some(ScalarRep::S));
        let mut xy = vec![corner_state(&st[0], |a, b| a * b)];
        classify_t_states(&mut xy, 1.0);
        assert_eq!(xy[0].rep_label, Some(ScalarRep::XY));
        let mut pair = vec![
            corner_state(&st[0], |a, _| a),
            corner_state(&st[0], |_, b| b),
        ];
        let g = classify_t_states(&mut pair, 1.0);
        assert_eq!(g[0].rep, ScalarRep::XYPair);
        assert!((g[0].projection - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_lattice_ground_state_is_s_like() {
        let (s, mut st) = t_states(0.02, 7);
        let t = SymmetryPoint::T.wavevector(s.lattice().pitch);
        let groups = classify_t_states(&mut st, s.degeneracy_tol(t));
        assert_eq!(groups[0].rep, ScalarRep::S);
        assert!(groups[0].projection >= 0.9, "{}", groups[0].projection);
        assert_eq!(groups[1].rep, ScalarRep::XYPair);
        assert_eq!(groups[2].rep, ScalarRep::XY);
    }

    #[test]
    fn pair_basis_is_fixed_by_mirror_parity() {
        let (s, _) = t_states(0.02, 5);
        let (st, _) = s.solve_t_point().unwrap();
        let waves = CornerWaves::find(&st[1]).unwrap();
        let x = &st[1].coefficients;
        let y = &st[2].coefficients;
        assert!(waves.overlap(Combo::Y, x).norm() < 1e-10);
        assert!(waves.overlap(Combo::X, y).norm() < 1e-10);
        assert!(waves.overlap(Combo::X, x).re > 0.5);
        // still eigenvectors
        let h = s.detuning_hamiltonian(st[1].k_perp);
        for v in [x, y] {
            let hv = h.apply(v);
            let r: f64 = hv
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b * st[1].detuning).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-9 * h.frobenius_norm());
        }
    }

    #[test]
    fn edges_ordered_and_missing_reported() {
        let (s, _) = t_states(0.02, 5);
        let (st, _) = s.solve_t_point().unwrap();
        let e = band_edges(&st, s.params().omega0).unwrap();
        assert!(e.t5 < e.t1 && e.t1 < e.t5p);
        let err = band_edges(&st[..1], s.params().omega0).unwrap_err();
        assert!(matches!(err, Error::MissingRepresentation { .. }));
    }

    #[test]
    fn empty_lattice_edges_collapse() {
        let (s, mut st) = t_states(0.0, 3);
        let t = SymmetryPoint::T.wavevector(s.lattice().pitch);
        let g = classify_t_states(&mut st, s.degeneracy_tol(t));
        assert_eq!(g[0].bands, 0..4);
        assert_eq!(g[0].rep, ScalarRep::FourFold);
        let e = band_edges(&st, s.params().omega0).unwrap();
        assert_eq!(e.t5, e.t1);
        assert_eq!(e.t1, e.t5p);
    }

    #[test]
    fn edge_differences_linear_in_contrast() {
        let gaps = |dphi: f64| {
            let s = OpwSolver::new(&LatticeSpec::reference().with_dphi(dphi), 5, 8);
            let (st, _) = s.solve_t_point().unwrap();
            let e = band_edges(&st, s.params().omega0).unwrap();
            (e.t1 - e.t5, e.t5p - e.t1)
        };
        let (a1, b1) = gaps(1e-5);
        for dphi in [1e-4, 1e-3] {
            let (a, b) = gaps(dphi);
            let r = dphi / 1e-5;
            assert!((a / (a1 * r) - 1.0).abs() < 0.02, "dphi {dphi}");
            assert!((b / (b1 * r) - 1.0).abs() < 0.02, "dphi {dphi}");
        }
    }
}
