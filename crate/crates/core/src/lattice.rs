//! Mirror phase pattern and its Fourier series on the square reciprocal lattice.
//!
//! One square pixel of side `a = Λ √FF` sits at the center of every unit
//! cell and carries the phase `Δφ`; the surrounding grid has zero phase.
//! Centering the pixel makes every Fourier coefficient real and even in both
//! indices, so the plane-wave matrices are real symmetric.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::LatticeSpec;

/// Below this argument `sinc` switches to its Taylor series.
const SINC_SERIES_BELOW: f64 = 1e-4;

/// `sin(x) / x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_BELOW {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Maps a coordinate into `[-pitch/2, pitch/2)`.
fn wrap(x: f64, pitch: f64) -> f64 {
    let r = (x / pitch + 0.5).rem_euclid(1.0) - 0.5;
    r * pitch
}

/// Mirror phase at `(x, y)`; coordinates are folded into the unit cell.
pub fn phase_pattern(lattice: &LatticeSpec, x: f64, y: f64) -> f64 {
    let half = 0.5 * lattice.pixel_side();
    let (xw, yw) = (wrap(x, lattice.pitch), wrap(y, lattice.pitch));
    if xw.abs() < half && yw.abs() < half {
        lattice.dphi
    } else {
        0.0
    }
}

/// Coefficient `φ_{m,n}` of `φ(r) = Σ φ_{m,n} exp(i 2π (m x + n y) / Λ)`.
pub fn fourier_coefficient(lattice: &LatticeSpec, m: i32, n: i32) -> f64 {
    let r = lattice.fill_factor.sqrt();
    lattice.dphi * lattice.fill_factor * sinc(PI * m as f64 * r) * sinc(PI * n as f64 * r)
}

/// Grid used to locate pattern edges before bisection.
const EDGE_SCAN_POINTS: usize = 256;
const GAUSS_NODES: usize = 32;

/// Positions in `[-Λ/2, Λ/2)` where `f` changes value, bisected to round-off.
fn edges_along(pitch: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let x0 = -0.5 * pitch;
    let dx = pitch / EDGE_SCAN_POINTS as f64;
    let mut out = Vec::new();
    for i in 0..EDGE_SCAN_POINTS {
        let (mut a, mut b) = (x0 + i as f64 * dx, x0 + (i + 1) as f64 * dx);
        let fa = f(a);
        if fa == f(b) {
            continue;
        }
        while b - a > 4.0 * f64::EPSILON * pitch {
            let mid = 0.5 * (a + b);
            if f(mid) == fa {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// `φ_{m,n}` by direct integration of [`phase_pattern`] over one cell.
///
/// Pattern edges are found by bisection along the cell axes; on every
/// resulting rectangle the phase is constant and the plane-wave integral is
/// done by Gauss-Legendre quadrature. This is an independent check of
/// [`fourier_coefficient`].
pub fn fourier_by_quadrature(lattice: &LatticeSpec, m: i32, n: i32) -> f64 {
    let pitch = lattice.pitch;
    let gl = gauss_quad::GaussLegendre::new(GAUSS_NODES.try_into().expect("nonzero"));
    let knots = |edges: Vec<f64>| {
        let mut k = vec![-0.5 * pitch];
        k.extend(edges);
        k.push(0.5 * pitch);
        k
    };
    let xs = knots(edges_along(pitch, |x| phase_pattern(lattice, x, 0.0)));
    let ys = knots(edges_along(pitch, |y| phase_pattern(lattice, 0.0, y)));
    let b = 2.0 * PI / pitch;
    let (gx, gy) = (b * m as f64, b * n as f64);
    let wave = |g: f64, a: f64, c: f64| {
        (
            gl.integrate(a, c, |x| (g * x).cos()),
            -gl.integrate(a, c, |x| (g * x).sin()),
        )
    };
    let mut acc = 0.0;
    for wx in xs.windows(2) {
        let (cx, sx) = wave(gx, wx[0], wx[1]);
        for wy in ys.windows(2) {
            let phase = phase_pattern(lattice, 0.5 * (wx[0] + wx[1]), 0.5 * (wy[0] + wy[1]));
            if phase == 0.0 {
                continue;
            }
            let (cy, sy) = wave(gy, wy[0], wy[1]);
            // real part of (cx + i sx)(cy + i sy)
            acc += phase * (cx * cy - sx * sy);
        }
    }
    acc / (pitch * pitch)
}

/// Fourier coefficients of the pattern, tabulated for `|m|, |n| <= halfwidth`
/// and evaluated on demand outside that window.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternFourier {
    lattice: LatticeSpec,
    halfwidth: i32,
    /// `sinc(π m √FF)` for `m` in `0..=halfwidth` (even in `m`).
    sinc_table: Vec<f64>,
}

impl PatternFourier {
    pub fn new(lattice: &LatticeSpec, halfwidth: usize) -> Self {
        let r = lattice.fill_factor.sqrt();
        let halfwidth = halfwidth as i32;
        Self {
            lattice: *lattice,
            halfwidth,
            sinc_table: (0..=halfwidth).map(|m| sinc(PI * m as f64 * r)).collect(),
        }
    }

    /// Table wide enough for every difference `G' - G` of a basis with the
    /// given half-width.
    pub fn for_basis(lattice: &LatticeSpec, basis_halfwidth: usize) -> Self {
        Self::new(lattice, 2 * basis_halfwidth + 1)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn get(&self, m: i32, n: i32) -> f64 {
        let (am, an) = (m.abs(), n.abs());
        if am <= self.halfwidth && an <= self.halfwidth {
            self.lattice.dphi
                * self.lattice.fill_factor
                * self.sinc_table[am as usize]
                * self.sinc_table[an as usize]
        } else {
            fourier_coefficient(&self.lattice, m, n)
        }
    }

    /// Coefficient coupling `source` into `target` (index difference `target - source`).
    pub fn coupling(&self, target: &ReciprocalVector, source: &ReciprocalVector) -> f64 {
        self.get(target.m - source.m, target.n - source.n)
    }

    /// Tabulated coefficients as `(m, n, value)` in lexicographic order.
    pub fn entries(&self) -> Vec<(i32, i32, f64)> {
        let h = self.halfwidth;
        (-h..=h)
            .flat_map(|m| (-h..=h).map(move |n| (m, n)))
            .map(|(m, n)| (m, n, self.get(m, n)))
            .collect()
    }
}

/// Reciprocal-lattice vector `G = (2π/Λ)(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalVector {
    pub m: i32,
    pub n: i32,
    pub gx: f64,
    pub gy: f64,
}

impl ReciprocalVector {
    pub fn new(m: i32, n: i32, pitch: f64) -> Self {
        let b = 2.0 * PI / pitch;
        Self {
            m,
            n,
            gx: b * m as f64,
            gy: b * n as f64,
        }
    }
}

/// All `G` with `|m|, |n| <= halfwidth`, lexicographic in `(m, n)`.
pub fn reciprocal_basis(halfwidth: usize, pitch: f64) -> Vec<ReciprocalVector> {
    let h = halfwidth as i32;
    (-h..=h)
        .flat_map(|m| (-h..=h).map(move |n| ReciprocalVector::new(m, n, pitch)))
        .collect()
}

/// Plane waves inside the square window `|k + G|_∞ <= (halfwidth + 1/2) b`
/// around the origin, lexicographic in `(m, n)`.
///
/// Inside the zone this is [`reciprocal_basis`] shifted with `k`. On a zone
/// boundary both edge waves are kept, so at T the set is invariant under the
/// full C4v group, which the fixed `|m|, |n| <= halfwidth` set is not.
pub fn reciprocal_basis_at(halfwidth: usize, pitch: f64, k: [f64; 2]) -> Vec<ReciprocalVector> {
    let b = 2.0 * PI / pitch;
    let edge = (halfwidth as f64 + 0.5) * b * (1.0 + 1e-9);
    let range = |kc: f64| {
        let lo = ((-edge - kc) / b).ceil() as i32;
        let hi = ((edge - kc) / b).floor() as i32;
        lo..=hi
    };
    range(k[0])
        .flat_map(|m| range(k[1]).map(move |n| ReciprocalVector::new(m, n, pitch)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference() -> LatticeSpec {
        LatticeSpec::reference()
    }

    #[test]
    fn sinc_branches_agree() {
        for &x in &[0.0, 1e-9, 5e-5, 9.99e-5, 1e-4, 1.01e-4, 0.3] {
            let direct = if x == 0.0 { 1.0 } else { f64::sin(x) / x };
            assert!((sinc(x) - direct).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn pattern_center_and_corner() {
        let l = reference();
        assert_eq!(phase_pattern(&l, 0.0, 0.0), 0.02);
        assert_eq!(phase_pattern(&l, l.pitch / 2.0, l.pitch / 2.0), 0.0);
        // periodic
        assert_eq!(phase_pattern(&l, 3.0 * l.pitch, -7.0 * l.pitch), 0.02);
    }

    #[test]
    fn monte_carlo_area_matches_fill_factor() {
        let l = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| {
                let x = rng.gen_range(-0.5..0.5) * l.pitch;
                let y = rng.gen_range(-0.5..0.5) * l.pitch;
                phase_pattern(&l, x, y) != 0.0
            })
            .count();
        let frac = hits as f64 / n as f64;
        assert!((frac - 0.65).abs() < 0.002, "fraction {frac}");
    }

    #[test]
    fn c4v_invariance_of_pattern() {
        let l = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = rng.gen_range(-1.0..1.0) * l.pitch;
            let y = rng.gen_range(-1.0..1.0) * l.pitch;
            let p = phase_pattern(&l, x, y);
            assert_eq!(p, phase_pattern(&l, -x, y));
            assert_eq!(p, phase_pattern(&l, y, x));
        }
    }

    #[test]
    fn coefficient_values() {
        let l = reference();
        assert_relative_eq!(fourier_coefficient(&l, 0, 0), 0.013, max_relative = 1e-14);
        let s = sinc(PI * 0.65_f64.sqrt());
        assert_relative_eq!(s, 0.225_775_012_486, max_relative = 1e-11);
        assert_relative_eq!(fourier_coefficient(&l, 1, 0), 2.936e-3, max_relative = 1e-3);
        for m in -4..=4 {
            for n in -4..=4 {
                let v = fourier_coefficient(&l, m, n);
                assert_eq!(v, fourier_coefficient(&l, -m, -n));
                assert_eq!(v, fourier_coefficient(&l, -m, n));
                assert!(v.abs() <= l.dphi.abs() * l.fill_factor);
            }
        }
    }

    #[test]
    fn table_matches_direct_formula() {
        let l = reference();
        let pf = PatternFourier::new(&l, 6);
        for m in -9..=9 {
            for n in -9..=9 {
                let a = pf.get(m, n);
                let b = fourier_coefficient(&l, m, n);
                assert!((a - b).abs() <= 1e-18, "({m},{n})");
            }
        }
        assert_eq!(pf.entries().len(), 13 * 13);
    }

    #[test]
    fn parseval_sum_converges() {
        let l = reference();
        let target = l.dphi * l.dphi * l.fill_factor;
        let sum = |h: i32| -> f64 {
            (-h..=h)
                .flat_map(|m| (-h..=h).map(move |n| (m, n)))
                .map(|(m, n)| fourier_coefficient(&l, m, n).powi(2))
                .sum()
        };
        // the sinc² tail decays like 1/h, so the 1% level is reached at
        // halfwidth 25 (20 leaves 1.21%)
        let mut last = f64::INFINITY;
        for h in [20, 25, 40, 60] {
            let rel = (sum(h) - target).abs() / target;
            assert!(rel < last, "deficit must shrink with halfwidth");
            last = rel;
            if h >= 25 {
                assert!(rel < 0.01, "halfwidth {h}: relative deficit {rel}");
            }
        }
    }

    #[test]
    fn quadrature_matches_analytic() {
        for l in [
            reference(),
            reference().with_fill_factor(0.3).with_dphi(-0.05),
        ] {
            for m in -3..=3 {
                for n in -3..=3 {
                    let q = fourier_by_quadrature(&l, m, n);
                    assert!((q - fourier_coefficient(&l, m, n)).abs() < 1e-12, "{m},{n}");
                }
            }
        }
    }

    #[test]
    fn k_centered_basis() {
        let p = 4e-6;
        assert_eq!(
            reciprocal_basis_at(7, p, [0.0, 0.0]),
            reciprocal_basis(7, p)
        );
        assert_eq!(
            reciprocal_basis_at(7, p, [0.3 * PI / p, -0.9 * PI / p]),
            reciprocal_basis(7, p)
        );
        let t = [PI / p, PI / p];
        let b = reciprocal_basis_at(7, p, t);
        assert_eq!(b.len(), 16 * 16);
        // mirror-symmetric set of k + G at T
        let b2 = 2.0 * PI / p;
        for g in &b {
            let (mx, my) = ((-(t[0] + g.gx) - t[0]) / b2, (-(t[1] + g.gy) - t[1]) / b2);
            assert!(b
                .iter()
                .any(|h| h.m == mx.round() as i32 && h.n == my.round() as i32));
        }
        assert_eq!(reciprocal_basis_at(7, p, [PI / p, 0.0]).len(), 16 * 15);
    }

    #[test]
    fn basis_size_and_order() {
        assert_eq!(reciprocal_basis(1, 4e-6).len(), 9);
        let b = reciprocal_basis(7, 4e-6);
        assert_eq!(b.len(), 225);
        assert_eq!((b[0].m, b[0].n), (-7, -7));
        assert_eq!((b[1].m, b[1].n), (-7, -6));
        assert_eq!((b[112].m, b[112].n), (0, 0));
        assert_eq!(b, reciprocal_basis(7, 4e-6));
        let g = ReciprocalVector::new(3, -2, 4e-6);
        assert_eq!(g.gx, 2.0 * PI / 4e-6 * 3.0);
        assert_eq!(g.gy, 2.0 * PI / 4e-6 * -2.0);
    }
}
