//! Spectral-flow scan: between two consecutive Dirichlet poles, `Q(λ)` is
//! strictly decreasing, so the number of negative eigenvalues of `Q(λ) − L`
//! is nondecreasing and jumps exactly at eigenvalues of the metric
//! Laplacian, by their multiplicity.

use super::point::{dirichlet_points, segments_avoiding, sort_points, Source, SpectralPoint};
use super::SpectralError;
use crate::discrete::delta0;
use crate::graph::MetricGraph;
use crate::krein::{eval_cs_real, QFunction};
use crate::linalg::{hermitian_eig, HermitianMatrix, Tridiagonal};
use crate::vertex_space::{Coupling, VertexSpace};

/// Grid points per unit λ.
pub const DEFAULT_GRID: f64 = 64.0;

/// The family `Q(λ) − L`.
enum Family {
    /// Unit lengths: `s(λ)(Q(λ) − L) = Δ_𝒢 − (1 − c(λ)) I − s(λ) L`.
    Unit { lap: HermitianMatrix, l: HermitianMatrix },
    General { q: QFunction, l: HermitianMatrix },
}

impl Family {
    fn new(g: &MetricGraph, vs: &VertexSpace, l: &Coupling) -> Self {
        let l = l.matrix().clone();
        if g.edges().iter().all(|e| (e.length - 1.0).abs() <= 1e-12) {
            Family::Unit { lap: delta0(g, vs), l }
        } else {
            Family::General {
                q: QFunction::new(g, vs),
                l,
            }
        }
    }

    /// Number of negative eigenvalues of `Q(λ) − L`.
    fn count(&self, lambda: f64) -> Result<usize, SpectralError> {
        match self {
            Family::Unit { lap, l } => {
                let (c, s) = eval_cs_real(lambda);
                let m = lap.shifted(c - 1.0).combine(1.0, l, -s);
                let t = Tridiagonal::from_hermitian(&m);
                Ok(if s > 0.0 { t.count_below(0.0) } else { t.count_above(0.0) })
            }
            Family::General { q, l } => {
                let m = q.eval_real(lambda)?.combine(1.0, l, -1.0);
                Ok(Tridiagonal::from_hermitian(&m).count_below(0.0))
            }
        }
    }

    /// Smallest `|eigenvalue|` of `Q(λ) − L`.
    fn smallest(&self, lambda: f64) -> Result<f64, SpectralError> {
        let m = match self {
            Family::Unit { lap, l } => {
                let (c, s) = eval_cs_real(lambda);
                lap.shifted(c - 1.0).combine(1.0 / s, l, -1.0)
            }
            Family::General { q, l } => q.eval_real(lambda)?.combine(1.0, l, -1.0),
        };
        Ok(hermitian_eig(&m)?
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .fold(f64::INFINITY, f64::min))
    }
}

/// Eigenvalues in `[lo, hi]` of the metric Laplacian with conditions
/// `(𝒢, L)`, located by the jumps of the negative count of `Q(λ) − L`
/// on a grid of `density` points per unit λ, then refined by bisection
/// to width `1e-10 (1 + |λ|)`.
///
/// Grid points inside a Dirichlet pole window are skipped; every decoupled
/// Dirichlet eigenvalue `(πk/ℓ_e)²` in range is reported as an exceptional
/// candidate.
pub fn metric_spectrum_scan(
    g: &MetricGraph,
    vs: &VertexSpace,
    l: &Coupling,
    lo: f64,
    hi: f64,
    density: f64,
) -> Result<Vec<SpectralPoint>, SpectralError> {
    super::require_range(lo, hi)?;
    super::require_coupling(vs, l)?;
    if !(density > 0.0 && density.is_finite()) {
        return Err(SpectralError::InvalidGrid(density));
    }
    let family = Family::new(g, vs, l);
    let poles: Vec<f64> = dirichlet_points(g, lo, hi).into_iter().map(|(p, _)| p).collect();

    // Widen the ends slightly so that eigenvalues sitting exactly on them
    // produce a jump; the poles keep their windows.
    let slack = |x: f64| 1e-8 * (1.0 + x.abs());
    let mut found: Vec<(f64, usize)> = Vec::new();
    for (a, b) in segments_avoiding(lo - slack(lo), hi + slack(hi), &poles) {
        let n = (((b - a) * density).ceil() as usize).max(2);
        let mut xa = a;
        let mut ca = family.count(a)?;
        for i in 1..=n {
            let xb = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
            let cb = family.count(xb)?;
            if cb > ca {
                refine(&family, xa, ca, xb, cb, &mut found)?;
            }
            xa = xb;
            ca = cb;
        }
    }

    found.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (x, k) in found {
        match merged.last_mut() {
            Some((y, m)) if (x - *y).abs() <= 1e-9 * (1.0 + x.abs()) => *m += k,
            _ => merged.push((x, k)),
        }
    }

    let mut points = Vec::new();
    for (x, k) in merged {
        if x < lo - slack(lo) || x > hi + slack(hi) {
            continue;
        }
        let residual = family.smallest(x)?;
        points.push(SpectralPoint::new(x, k, Source::Scan, residual));
    }
    for p in poles {
        if p >= lo && p <= hi {
            points.push(SpectralPoint::new(p, 1, Source::ExceptionalCandidate, 0.0));
        }
    }
    sort_points(&mut points);
    Ok(points)
}

fn refine(
    family: &Family,
    a: f64,
    ca: usize,
    b: f64,
    cb: usize,
    out: &mut Vec<(f64, usize)>,
) -> Result<(), SpectralError> {
    if cb <= ca {
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    if b - a <= 1e-10 * (1.0 + mid.abs()) || mid <= a || mid >= b {
        out.push((mid, cb - ca));
        return Ok(());
    }
    let cm = family.count(mid)?;
    refine(family, a, ca, mid, cm.clamp(ca, cb), out)?;
    refine(family, mid, cm.clamp(ca, cb), b, cb, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, seeded_rng};
    use crate::spectral::point::expand;
    use std::f64::consts::PI;

    #[test]
    fn path_with_transparent_vertex() {
        let g = MetricGraph::path(&[1.0, 2.0]).unwrap();
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_scan(&g, &vs, &Coupling::zero(3), 0.5, 3.0, DEFAULT_GRID).unwrap();
        let finite = expand(&pts);
        assert_eq!(finite.len(), 1);
        assert!((finite[0] - (PI / 3.0).powi(2)).abs() < 1e-9);
        let exc: Vec<f64> = pts.iter().filter(|p| p.is_exceptional()).map(|p| p.value).collect();
        assert_eq!(exc.len(), 1);
        assert!((exc[0] - PI * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn neumann_edge_has_nothing_below_pi_squared() {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_scan(&g, &vs, &Coupling::zero(2), 0.5, 9.0, DEFAULT_GRID).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn triangle_double_eigenvalue() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_scan(&g, &vs, &Coupling::zero(3), 1.0, 9.0, DEFAULT_GRID).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 2);
        assert!((pts[0].value - (2.0 * PI / 3.0).powi(2)).abs() < 1e-9);
        assert!(pts[0].residual < 1e-8);
    }

    #[test]
    fn eigenvalue_on_the_lower_end_is_found() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_scan(&g, &vs, &Coupling::zero(3), 0.0, 1.0, DEFAULT_GRID).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].value.abs() < 1e-9);
    }

    #[test]
    fn unit_and_general_families_agree() {
        let mut rng = seeded_rng(17);
        let g = MetricGraph::cycle(4);
        let vs = VertexSpace::standard(&g);
        let l = Coupling::dense(random_hermitian(&mut rng, 4).into_matrix()).unwrap();
        let unit = Family::new(&g, &vs, &l);
        let general = Family::General {
            q: QFunction::new(&g, &vs),
            l: l.matrix().clone(),
        };
        for i in 0..200 {
            let lambda = -5.0 + 0.173 * i as f64;
            if dirichlet_points(&g, lambda - 1e-3, lambda + 1e-3).is_empty() {
                assert_eq!(unit.count(lambda).unwrap(), general.count(lambda).unwrap(), "λ = {lambda}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        assert!(metric_spectrum_scan(&g, &vs, &Coupling::zero(3), 2.0, 1.0, 64.0).is_err());
        assert!(metric_spectrum_scan(&g, &vs, &Coupling::zero(3), 0.0, 1.0, 0.0).is_err());
        assert!(metric_spectrum_scan(&g, &vs, &Coupling::zero(2), 0.0, 1.0, 64.0).is_err());
    }
}
