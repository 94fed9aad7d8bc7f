//! Transfer map `η(λ) = s(λ) L₀ + 1 − c(λ)` for unit graphs with `L = L₀ I`.
//!
//! `λ ∉ Σ^Dir` is an eigenvalue of the metric Laplacian exactly when `η(λ)`
//! is an eigenvalue of `Δ_𝒢`, with the same multiplicity. Between two
//! consecutive Dirichlet points `(πk)²` the map `η(λ) − η₀ = −s(λ)(q(λ) − L₀)`
//! with `q` strictly decreasing, so each band contains at most one root and
//! that root is simple.

use std::f64::consts::PI;

use super::point::{cluster, pole_window, sort_points, Source, SpectralPoint};
use super::SpectralError;
use crate::discrete::delta0;
use crate::graph::MetricGraph;
use crate::krein::{eval_cs_derivative_real, eval_cs_real};
use crate::linalg::hermitian_eig;
use crate::vertex_space::{Coupling, VertexSpace};

const GRID_PER_BAND: usize = 64;

pub fn transfer_forward(lambda: f64, l0: f64) -> f64 {
    let (c, s) = eval_cs_real(lambda);
    s * l0 + 1.0 - c
}

/// `η'(λ) = s'(λ) L₀ + s(λ)/2`.
pub fn transfer_derivative(lambda: f64, l0: f64) -> f64 {
    let (_, s) = eval_cs_real(lambda);
    let (_, ds) = eval_cs_derivative_real(lambda);
    ds * l0 + s / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferRoot {
    pub lambda: f64,
    /// `k` with `(πk)² ≤ λ < (π(k+1))²`; negative λ belong to band 0.
    pub band: usize,
    /// Lies in the pole window of a Dirichlet point `(πk)²`, `k ≥ 1`.
    pub exceptional: bool,
    /// `|η(λ) − η₀|`.
    pub residual: f64,
    /// `η'(λ)`.
    pub slope: f64,
}

fn band_of(lambda: f64) -> usize {
    if lambda <= 0.0 {
        0
    } else {
        (lambda.sqrt() / PI).floor() as usize
    }
}

fn nearest_dirichlet(lambda: f64) -> Option<f64> {
    if lambda <= 0.0 {
        return None;
    }
    let k = (lambda.sqrt() / PI).round();
    (k >= 1.0).then(|| (PI * k).powi(2))
}

fn is_exceptional(lambda: f64) -> bool {
    nearest_dirichlet(lambda).is_some_and(|p| (lambda - p).abs() <= pole_window(p))
}

fn make_root(lambda: f64, eta: f64, l0: f64) -> TransferRoot {
    TransferRoot {
        lambda,
        band: band_of(lambda),
        exceptional: is_exceptional(lambda),
        residual: (transfer_forward(lambda, l0) - eta).abs(),
        slope: transfer_derivative(lambda, l0),
    }
}

/// All `λ ∈ [0, λ_max]` with `η(λ) = η₀`.
pub fn transfer_inverse(eta: f64, l0: f64, lambda_max: f64) -> Vec<TransferRoot> {
    transfer_inverse_range(eta, l0, 0.0, lambda_max)
}

/// All `λ ∈ [lo, hi]` with `η(λ) = η₀`, ascending.
pub fn transfer_inverse_range(eta: f64, l0: f64, lo: f64, hi: f64) -> Vec<TransferRoot> {
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Vec::new();
    }
    let mut lambdas = if l0 == 0.0 {
        closed_form_roots(eta, lo, hi)
    } else {
        bracketed_roots(eta, l0, lo, hi)
    };
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    lambdas.into_iter().map(|l| make_root(l, eta, l0)).collect()
}

/// `L₀ = 0`: `cos √λ = 1 − η`, so `√λ ∈ {θ + 2πm, 2π(m+1) − θ}` with
/// `θ = arccos(1 − η)`.
fn closed_form_roots(eta: f64, lo: f64, hi: f64) -> Vec<f64> {
    if !(0.0..=2.0).contains(&eta) || hi < 0.0 {
        return Vec::new();
    }
    let theta = (1.0 - eta).acos();
    let top = hi.max(0.0).sqrt();
    let mut out = Vec::new();
    let mut m = 0.0;
    loop {
        let a = theta + 2.0 * PI * m;
        let b = 2.0 * PI * (m + 1.0) - theta;
        if a > top + 1e-9 {
            break;
        }
        for r in [a, b] {
            let l = r * r;
            if l >= lo && l <= hi {
                out.push(l);
            }
        }
        m += 1.0;
    }
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut fa: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a) <= 1e-12 * (1.0 + mid.abs()) || mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Sign-change search on [lo, hi] with the given grid spacing.
pub(crate) fn sign_change_roots(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(lo);
    if fa == 0.0 {
        out.push(lo);
    }
    for i in 1..=n {
        let xb = if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 };
        let fb = f(xb);
        if fb == 0.0 {
            out.push(xb);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            out.push(bisect(f, xa, fa, xb));
        }
        xa = xb;
        fa = fb;
    }
    out
}

/// `L₀ ≠ 0`: bracketing on a grid of 64 points per band, bands separated
/// by the Dirichlet points.
fn bracketed_roots(eta: f64, l0: f64, lo: f64, hi: f64) -> Vec<f64> {
    let f = |l: f64| transfer_forward(l, l0) - eta;
    let mut out = Vec::new();
    // Dirichlet points themselves: η((πk)²) = 1 − (−1)^k whatever L₀ is.
    let mut edges = vec![lo];
    let mut k = 1.0;
    loop {
        let p = (PI * k).powi(2);
        if p >= hi {
            break;
        }
        if p > lo {
            edges.push(p);
            if (f(p)).abs() <= 1e-12 {
                out.push(p);
            }
        }
        k += 1.0;
    }
    edges.push(hi);
    for w in edges.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        if a > lo || is_exceptional(a) {
            a += pole_window(a).min((b - a) / 4.0);
        }
        if b < hi || is_exceptional(b) {
            b -= pole_window(b).min((b - a) / 4.0);
        }
        // The part of band 0 below zero may be long; keep the spacing at
        // most one unit there.
        let points = if a < 0.0 {
            GRID_PER_BAND.max((b - a).ceil() as usize * 8)
        } else {
            GRID_PER_BAND
        };
        if b > a {
            out.extend(sign_change_roots(&f, a, b, points));
        }
    }
    out
}

/// Metric spectrum of a unit graph with `L = L₀ I` on `[lo, hi]` via the
/// transfer map. Every Dirichlet point in range is emitted as an exceptional
/// candidate; transfer roots inside a pole window are absorbed into it.
pub fn metric_spectrum_equilateral(
    g: &MetricGraph,
    vs: &VertexSpace,
    l: &Coupling,
    lo: f64,
    hi: f64,
) -> Result<Vec<SpectralPoint>, SpectralError> {
    super::require_unit(g)?;
    super::require_range(lo, hi)?;
    super::require_coupling(vs, l)?;
    let l0 = l.as_scalar().ok_or(SpectralError::NonScalarCoupling)?;
    let eig = hermitian_eig(&delta0(g, vs))?;
    let mut points = Vec::new();
    for (eta, mult) in cluster(&eig.eigenvalues, 1e-8) {
        for root in transfer_inverse_range(eta, l0, lo, hi) {
            if root.exceptional {
                continue;
            }
            points.push(SpectralPoint::new(root.lambda, mult, Source::Transfer, root.residual));
        }
    }
    points.extend(exceptional_dirichlet(lo, hi));
    sort_points(&mut points);
    Ok(points)
}

/// `(πk)²`, `k ≥ 1`, in `[lo, hi]` as exceptional candidates.
pub(crate) fn exceptional_dirichlet(lo: f64, hi: f64) -> Vec<SpectralPoint> {
    let mut out = Vec::new();
    let mut k = 1.0;
    loop {
        let p = (PI * k).powi(2);
        if p > hi {
            break;
        }
        if p >= lo {
            out.push(SpectralPoint::new(p, 1, Source::ExceptionalCandidate, 0.0));
        }
        k += 1.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SpaceDecl;
    use crate::spectral::point::expand;

    #[test]
    fn forward_values() {
        assert_eq!(transfer_forward(0.0, 0.0), 0.0);
        assert!((transfer_forward(PI * PI / 4.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((transfer_forward(PI * PI / 4.0, 1.0) - (2.0 / PI + 1.0)).abs() < 1e-15);
        assert!((transfer_forward(PI * PI / 4.0, 1.0) - 1.6366198).abs() < 1e-7);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &(l, l0) in &[(0.0, 0.0), (2.0, 0.7), (-3.0, -1.0), (30.0, 2.5)] {
            let h = 1e-6;
            let fd = (transfer_forward(l + h, l0) - transfer_forward(l - h, l0)) / (2.0 * h);
            assert!((transfer_derivative(l, l0) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn inverse_closed_form_examples() {
        let r = transfer_inverse(0.0, 0.0, 50.0);
        let values: Vec<f64> = r.iter().map(|x| x.lambda).collect();
        assert_eq!(values.len(), 2);
        assert_eq!(values[0], 0.0);
        assert!((values[1] - 4.0 * PI * PI).abs() < 1e-12);
        assert!(!r[0].exceptional && r[1].exceptional);

        let r = transfer_inverse(1.5, 0.0, 20.0);
        assert_eq!(r.len(), 2);
        assert!((r[0].lambda - (2.0 * PI / 3.0).powi(2)).abs() < 1e-12);
        assert!((r[1].lambda - (4.0 * PI / 3.0).powi(2)).abs() < 1e-12);
        assert!((r[0].lambda - 4.38649).abs() < 1e-5 && (r[1].lambda - 17.5460).abs() < 1e-4);
        assert_eq!((r[0].band, r[1].band), (0, 1));

        let r = transfer_inverse(2.0, 0.0, 12.0);
        assert_eq!(r.len(), 1);
        assert!((r[0].lambda - PI * PI).abs() < 1e-12 && r[0].exceptional);

        assert!(transfer_inverse(2.5, 0.0, 100.0).is_empty());
        assert!(transfer_inverse(-0.1, 0.0, 100.0).is_empty());
    }

    #[test]
    fn bracketed_roots_solve_the_equation() {
        for &l0 in &[1.0, -0.5, 3.0] {
            for &eta in &[0.0, 0.4, 1.5, 2.0] {
                let roots = transfer_inverse_range(eta, l0, -20.0, 120.0);
                for r in &roots {
                    assert!(r.residual < 1e-9, "eta={eta} l0={l0} root {r:?}");
                    if !r.exceptional {
                        assert!(r.slope.abs() > 1e-6);
                    }
                }
                // one root per band below the last Dirichlet point in range
                let finite: Vec<&TransferRoot> = roots.iter().filter(|r| !r.exceptional).collect();
                for pair in finite.windows(2) {
                    assert_ne!(pair[0].band, pair[1].band);
                }
                assert!(finite.len() >= 2, "eta={eta} l0={l0} {roots:?}");
            }
        }
    }

    #[test]
    fn bracketing_agrees_with_closed_form_as_coupling_vanishes() {
        let closed = transfer_inverse(1.5, 0.0, 60.0);
        let nearly = transfer_inverse(1.5, 1e-12, 60.0);
        assert_eq!(closed.len(), nearly.len());
        for (a, b) in closed.iter().zip(&nearly) {
            assert!((a.lambda - b.lambda).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_and_single_edge_spectra() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_equilateral(&g, &vs, &Coupling::zero(3), 0.0, 20.0).unwrap();
        let finite = expand(&pts);
        let want = [0.0, 4.38649, 4.38649, 17.5460, 17.5460];
        assert_eq!(finite.len(), 5);
        for (x, y) in finite.iter().zip(want) {
            assert!((x - y).abs() < 1e-4);
        }
        let exc: Vec<f64> = pts.iter().filter(|p| p.is_exceptional()).map(|p| p.value).collect();
        assert_eq!(exc.len(), 1);
        assert!((exc[0] - PI * PI).abs() < 1e-12);

        let g = MetricGraph::single_edge(1.0).unwrap();
        let pts = metric_spectrum_equilateral(&g, &VertexSpace::standard(&g), &Coupling::zero(2), 0.0, 9.0).unwrap();
        assert_eq!(pts, vec![SpectralPoint::new(0.0, 1, Source::Transfer, 0.0)]);

        let vs = VertexSpace::build(&g, &[SpaceDecl::Dirichlet, SpaceDecl::Dirichlet]).unwrap();
        let pts = metric_spectrum_equilateral(&g, &vs, &Coupling::zero(0), 0.0, 100.0).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.is_exceptional()));
    }

    #[test]
    fn robin_edge_has_negative_eigenvalue() {
        // L = 1 on a unit edge lowers the form ∫|f'|² − |f(0)|² − |f(1)|²
        // below zero, so exactly one eigenvalue is negative.
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let pts = metric_spectrum_equilateral(&g, &vs, &Coupling::scalar(1.0, 2), -10.0, 5.0).unwrap();
        assert_eq!(pts.iter().filter(|p| p.value < 0.0).count(), 1);
        assert!(pts.iter().all(|p| p.residual < 1e-9));
        let pts = metric_spectrum_equilateral(&g, &vs, &Coupling::scalar(-1.0, 2), -10.0, 0.0).unwrap();
        assert!(pts.is_empty());
    }
}
