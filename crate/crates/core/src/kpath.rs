//! High-symmetry paths through the square-lattice Brillouin zone.
//!
//! Points are named `G` (Γ, zone center), `Z` (edge midpoint, `(π/Λ, 0)`) and
//! `T` (zone corner, `(π/Λ, π/Λ)`). A path string joins names with `:`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryPoint {
    Gamma,
    Z,
    T,
}

impl SymmetryPoint {
    pub fn parse(token: &str) -> Result<Self> {
        match token.trim() {
            "G" | "g" | "Γ" | "Gamma" => Ok(Self::Gamma),
            "Z" | "z" => Ok(Self::Z),
            "T" | "t" => Ok(Self::T),
            other => Err(Error::KPath(format!(
                "unknown point `{other}` (expected G, Z or T)"
            ))),
        }
    }

    /// Coordinates in units of `π / Λ`.
    pub fn reduced(self) -> [f64; 2] {
        match self {
            Self::Gamma => [0.0, 0.0],
            Self::Z => [1.0, 0.0],
            Self::T => [1.0, 1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Gamma => "G",
            Self::Z => "Z",
            Self::T => "T",
        }
    }

    pub fn wavevector(self, pitch: f64) -> [f64; 2] {
        let [x, y] = self.reduced();
        let s = std::f64::consts::PI / pitch;
        [x * s, y * s]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KPath {
    pub points: Vec<SymmetryPoint>,
    pub samples_per_segment: usize,
}

/// One sampled wavevector on a path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KPoint {
    pub k: [f64; 2],
    /// Cumulative path length from the first point, rad/m.
    pub path_pos: f64,
    /// Set when the sample coincides with a named vertex.
    pub label: Option<SymmetryPoint>,
}

impl KPath {
    pub fn parse(spec: &str, samples_per_segment: usize) -> Result<Self> {
        let points = spec
            .split(':')
            .map(SymmetryPoint::parse)
            .collect::<Result<Vec<_>>>()?;
        if points.len() < 2 {
            return Err(Error::KPath(format!("`{spec}` needs at least two points")));
        }
        if samples_per_segment == 0 {
            return Err(Error::KPath("samples per segment must be >= 1".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::KPath(format!(
                "zero-length segment {0}:{0}",
                w[0].name()
            )));
        }
        Ok(Self {
            points,
            samples_per_segment,
        })
    }

    /// Number of sampled k-points (endpoints included, vertices shared).
    pub fn len(&self) -> usize {
        (self.points.len() - 1) * self.samples_per_segment + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn describe(&self) -> String {
        self.points
            .iter()
            .map(|p| p.name())
            .collect::<Vec<_>>()
            .join(":")
    }

    pub fn sample(&self, pitch: f64) -> Vec<KPoint> {
        let n = self.samples_per_segment;
        let mut out = Vec::with_capacity(self.len());
        let mut pos = 0.0;
        out.push(KPoint {
            k: self.points[0].wavevector(pitch),
            path_pos: 0.0,
            label: Some(self.points[0]),
        });
        for w in self.points.windows(2) {
            let a = w[0].wavevector(pitch);
            let b = w[1].wavevector(pitch);
            let seg = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            for i in 1..=n {
                let t = i as f64 / n as f64;
                let k = if i == n {
                    b
                } else {
                    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
                };
                out.push(KPoint {
                    k,
                    path_pos: pos + t * seg,
                    label: (i == n).then_some(w[1]),
                });
            }
            pos += seg;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_counts_are_inclusive() {
        let p = KPath::parse("G:Z", 10).unwrap();
        assert_eq!(p.sample(4e-6).len(), 11);
        let p = KPath::parse("G:Z:T:G", 40).unwrap();
        let s = p.sample(4e-6);
        assert_eq!(s.len(), 121);
        assert_eq!(s[40].label, Some(SymmetryPoint::Z));
        assert_eq!(s[80].label, Some(SymmetryPoint::T));
        assert_eq!(s[80].k, SymmetryPoint::T.wavevector(4e-6));
        let total = std::f64::consts::PI / 4e-6 * (2.0 + std::f64::consts::SQRT_2);
        assert!((s[120].path_pos - total).abs() < 1e-9 * total);
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(KPath::parse("G:Q", 4).is_err());
        assert!(KPath::parse("G", 4).is_err());
        assert!(KPath::parse("G:G:T", 4).is_err());
        assert!(KPath::parse("G:T", 0).is_err());
    }
}
