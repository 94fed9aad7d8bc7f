use std::fmt;

use crate::graph::MetricGraph;

/// How a spectral point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// Root of the transfer equation for an eigenvalue of the discrete Laplacian.
    Transfer,
    /// Located by the spectral-flow scan of `Q(λ) − L`.
    Scan,
    /// Direct computation (eigendecomposition or finite elements).
    Oracle,
    /// Lies in a Dirichlet pole window; the Q-function cannot decide it.
    ExceptionalCandidate,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Transfer => "transfer",
            Source::Scan => "scan",
            Source::Oracle => "oracle",
            Source::ExceptionalCandidate => "exceptional",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint {
    pub value: f64,
    pub multiplicity: usize,
    pub source: Source,
    /// Method-specific diagnostic, always nonnegative.
    pub residual: f64,
}

impl SpectralPoint {
    pub fn new(value: f64, multiplicity: usize, source: Source, residual: f64) -> Self {
        Self {
            value,
            multiplicity,
            source,
            residual,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        self.source == Source::ExceptionalCandidate
    }
}

pub fn sort_points(points: &mut [SpectralPoint]) {
    points.sort_by(|a, b| a.value.total_cmp(&b.value));
}

/// Non-exceptional points expanded by multiplicity, ascending.
pub fn expand(points: &[SpectralPoint]) -> Vec<f64> {
    let mut out: Vec<f64> = points
        .iter()
        .filter(|p| !p.is_exceptional())
        .flat_map(|p| std::iter::repeat_n(p.value, p.multiplicity))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Groups sorted values whose consecutive gaps are at most `tol`; returns
/// (mean, count) per group.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for x in sorted {
        if let Some(&last) = group.last() {
            if x - last > tol {
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
    }
    out
}

/// Half-width of the excluded window around a pole at `p`.
pub fn pole_window(p: f64) -> f64 {
    (1e-7 * p.abs()).max(1e-6)
}

/// Decoupled Dirichlet eigenvalues `(πk/ℓ_e)²`, `k ≥ 1`, in `[lo, hi]`,
/// merged across edges; each entry carries the number of edges sharing it.
pub fn dirichlet_points(g: &MetricGraph, lo: f64, hi: f64) -> Vec<(f64, usize)> {
    let mut all = Vec::new();
    for e in g.edges() {
        let base = std::f64::consts::PI / e.length;
        let mut k = 1u64;
        loop {
            let p = (base * k as f64).powi(2);
            if p > hi + pole_window(p) {
                break;
            }
            if p >= lo - pole_window(p) {
                all.push(p);
            }
            k += 1;
        }
    }
    all.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for p in all {
        match out.last_mut() {
            Some((q, n)) if (p - *q).abs() <= 1e-12 * (1.0 + p) => *n += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Splits `[lo, hi]` into closed segments that avoid the windows around `poles`.
pub fn segments_avoiding(lo: f64, hi: f64, poles: &[f64]) -> Vec<(f64, f64)> {
    let mut segs = Vec::new();
    let mut start = lo;
    let mut sorted = poles.to_vec();
    sorted.sort_by(f64::total_cmp);
    for p in sorted {
        let w = pole_window(p);
        if p + w < start || p - w > hi {
            continue;
        }
        if p - w > start {
            segs.push((start, p - w));
        }
        start = start.max(p + w);
    }
    if hi > start {
        segs.push((start, hi));
    }
    segs
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn clustering() {
        let c = cluster(&[1.5, 0.0, 1.5 + 1e-10, 2.0], 1e-8);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].1, 2);
        assert!(cluster(&[], 1e-8).is_empty());
    }

    #[test]
    fn dirichlet_points_of_path() {
        let g = MetricGraph::path(&[1.0, 2.0]).unwrap();
        let pts = dirichlet_points(&g, 0.5, 3.0);
        assert_eq!(pts.len(), 1);
        assert!((pts[0].0 - PI * PI / 4.0).abs() < 1e-14);
        // π² is shared by both edges (k=1 on the unit edge, k=2 on the long one)
        let pts = dirichlet_points(&g, 9.0, 10.0);
        assert_eq!(pts, vec![(PI * PI, 2)]);
    }

    #[test]
    fn segments() {
        let s = segments_avoiding(0.0, 10.0, &[2.0, 5.0, 20.0]);
        assert_eq!(s.len(), 3);
        assert!((s[0].1 - (2.0 - 1e-6)).abs() < 1e-15);
        assert!((s[1].0 - (2.0 + 1e-6)).abs() < 1e-15);
        assert_eq!(s[2].1, 10.0);
        assert_eq!(segments_avoiding(0.0, 1.0, &[0.0]), vec![(1e-6, 1.0)]);
    }
}
