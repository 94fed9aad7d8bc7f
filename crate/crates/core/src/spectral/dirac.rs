//! Dirac spectra on unit graphs.
//!
//! For `M = M₀ I`, `μ ∉ Σ_m` is an eigenvalue exactly when
//! `s(μ² − m²)(μ + m) M₀ + 1 − c(μ² − m²)` is an eigenvalue of `Δ_𝒢`, where
//! `Σ_m = {±√((πk)² + m²) : k ≥ 0}`. For the symmetric-component operator
//! the condition pairs two discrete eigenvalues `η₁, η₂`:
//! `(η₁ − 1 + c)(η₂ − 1 + c) = m² s²` with `c, s` taken at `λ − m²`.

use std::f64::consts::PI;

use super::point::{cluster, segments_avoiding, sort_points, Source, SpectralPoint};
use super::transfer::sign_change_roots;
use super::SpectralError;
use crate::discrete::delta0;
use crate::graph::MetricGraph;
use crate::krein::eval_cs_real;
use crate::linalg::hermitian_eig;
use crate::vertex_space::VertexSpace;

const DIRAC_GRID: f64 = 64.0;
const SYM_GRID: f64 = 512.0;

fn discrete_eigenvalues(g: &MetricGraph, vs: &VertexSpace) -> Result<Vec<(f64, usize)>, SpectralError> {
    let eig = hermitian_eig(&delta0(g, vs))?;
    Ok(cluster(&eig.eigenvalues, 1e-8))
}

fn grid_points(a: f64, b: f64, density: f64) -> usize {
    (((b - a) * density).ceil() as usize).max(2)
}

/// `Σ_m ∩ [lo, hi]`.
fn dirac_exceptional(m: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0.0;
    loop {
        let p = ((PI * k).powi(2) + m * m).sqrt();
        if p > lo.abs().max(hi.abs()) + 1.0 {
            break;
        }
        for x in [p, -p] {
            if x >= lo && x <= hi && !out.contains(&x) {
                out.push(x);
            }
        }
        k += 1.0;
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalues `μ ∈ [lo, hi]` of the Dirac operator with mass `m` and
/// scalar coupling `M₀` on a unit graph. Points of `Σ_m` in range are
/// reported as exceptional candidates.
pub fn dirac_spectrum(
    g: &MetricGraph,
    vs: &VertexSpace,
    m0: f64,
    m: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<SpectralPoint>, SpectralError> {
    super::require_unit(g)?;
    super::require_range(lo, hi)?;
    let exceptional = dirac_exceptional(m, lo, hi);
    let segments = segments_avoiding(lo, hi, &exceptional);
    let forward = |mu: f64| {
        let (c, s) = eval_cs_real(mu * mu - m * m);
        s * (mu + m) * m0 + 1.0 - c
    };
    let mut points = Vec::new();
    for (eta, mult) in discrete_eigenvalues(g, vs)? {
        let f = |mu: f64| forward(mu) - eta;
        for &(a, b) in &segments {
            for mu in sign_change_roots(&f, a, b, grid_points(a, b, DIRAC_GRID)) {
                points.push(SpectralPoint::new(mu, mult, Source::Transfer, f(mu).abs()));
            }
        }
    }
    points.extend(
        exceptional
            .into_iter()
            .map(|p| SpectralPoint::new(p, 1, Source::ExceptionalCandidate, 0.0)),
    );
    sort_points(&mut points);
    Ok(points)
}

/// `g(λ) = (η₁ − 1 + c)(η₂ − 1 + c) − m² s²` with `c, s` at `λ − m²`.
pub fn sym_pair_function(lambda: f64, eta1: f64, eta2: f64, m: f64) -> f64 {
    let (c, s) = eval_cs_real(lambda - m * m);
    (eta1 - 1.0 + c) * (eta2 - 1.0 + c) - m * m * s * s
}

/// A root of the pair condition together with the pairs `(η₁, η₂)` that
/// produce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoint {
    pub point: SpectralPoint,
    pub pairs: Vec<(f64, f64)>,
}

/// Roots in `[lo, hi]` of the pair condition over all unordered pairs of
/// discrete eigenvalues, with windows around `Σ^Dir + m²` removed. Roots
/// closer than `1e-9` are merged.
///
/// The multiplicity of a root counts the discrete eigenvalues (with
/// multiplicity) solving `η − 1 + c = m s` plus those solving
/// `η − 1 + c = −m s`; at `m = 0` both conditions coincide, so every
/// scalar eigenvalue appears twice.
pub fn dirac_sym_spectrum(
    g: &MetricGraph,
    vs: &VertexSpace,
    m: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<SymPoint>, SpectralError> {
    super::require_unit(g)?;
    super::require_range(lo, hi)?;
    let etas = discrete_eigenvalues(g, vs)?;
    let mut poles = Vec::new();
    let mut k = 1.0;
    loop {
        let p = (PI * k).powi(2) + m * m;
        if p > hi + 1.0 {
            break;
        }
        poles.push(p);
        k += 1.0;
    }
    let segments = segments_avoiding(lo, hi, &poles);

    let mut raw: Vec<(f64, (f64, f64))> = Vec::new();
    for (i, &(e1, _)) in etas.iter().enumerate() {
        for &(e2, _) in &etas[i..] {
            let diagonal = e1 == e2;
            for &(a, b) in &segments {
                let n = grid_points(a, b, SYM_GRID);
                if diagonal {
                    // g factors as (η − 1 + c − m s)(η − 1 + c + m s); solving
                    // each factor avoids the tangential double roots of g.
                    for sign in [1.0, -1.0] {
                        let f = |l: f64| {
                            let (c, s) = eval_cs_real(l - m * m);
                            e1 - 1.0 + c - sign * m * s
                        };
                        raw.extend(sign_change_roots(&f, a, b, n).into_iter().map(|l| (l, (e1, e2))));
                        if m == 0.0 {
                            break;
                        }
                    }
                } else {
                    let f = |l: f64| sym_pair_function(l, e1, e2, m);
                    raw.extend(sign_change_roots(&f, a, b, n).into_iter().map(|l| (l, (e1, e2))));
                }
            }
        }
    }
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut out: Vec<SymPoint> = Vec::new();
    for (l, pair) in raw {
        if let Some(last) = out.last_mut() {
            if (l - last.point.value).abs() <= 1e-9 {
                if !last.pairs.contains(&pair) {
                    last.pairs.push(pair);
                }
                continue;
            }
        }
        out.push(SymPoint {
            point: SpectralPoint::new(l, 1, Source::Transfer, 0.0),
            pairs: vec![pair],
        });
    }
    for p in &mut out {
        let l = p.point.value;
        let (c, s) = eval_cs_real(l - m * m);
        let mut mult = 0;
        for &(eta, k) in &etas {
            let defect = eta - 1.0 + c;
            if (defect - m * s).abs() <= 1e-7 {
                mult += k;
            }
            if (defect + m * s).abs() <= 1e-7 {
                mult += k;
            }
        }
        p.point.multiplicity = mult.max(1);
        p.point.residual = p
            .pairs
            .iter()
            .map(|&(a, b)| sym_pair_function(l, a, b, m).abs())
            .fold(f64::INFINITY, f64::min);
    }
    for p in poles {
        if p >= lo && p <= hi {
            out.push(SymPoint {
                point: SpectralPoint::new(p, 1, Source::ExceptionalCandidate, 0.0),
                pairs: Vec::new(),
            });
        }
    }
    out.sort_by(|a, b| a.point.value.total_cmp(&b.point.value));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SpaceDecl;
    use crate::spectral::point::expand;
    use crate::spectral::transfer::metric_spectrum_equilateral;
    use crate::vertex_space::Coupling;

    fn triangle() -> (MetricGraph, VertexSpace) {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        (g, vs)
    }

    #[test]
    fn massless_triangle_is_symmetric() {
        let (g, vs) = triangle();
        let pts = dirac_spectrum(&g, &vs, 0.0, 0.0, -3.0, 3.0).unwrap();
        let finite: Vec<&SpectralPoint> = pts.iter().filter(|p| !p.is_exceptional()).collect();
        assert_eq!(finite.len(), 2);
        assert!((finite[0].value + 2.0 * PI / 3.0).abs() < 1e-10);
        assert!((finite[1].value - 2.0 * PI / 3.0).abs() < 1e-10);
        assert!(finite.iter().all(|p| p.multiplicity == 2));
        // μ = 0 is in Σ_0
        assert!(pts.iter().any(|p| p.is_exceptional() && p.value == 0.0));
    }

    #[test]
    fn massive_triangle_shifts_by_mass() {
        let (g, vs) = triangle();
        let pts = dirac_spectrum(&g, &vs, 0.0, 1.0, 0.5, 3.0).unwrap();
        let finite = expand(&pts);
        assert!((finite[0] - ((2.0 * PI / 3.0).powi(2) + 1.0).sqrt()).abs() < 1e-10);
        assert!((finite[0] - 2.32088).abs() < 1e-5);
        // η = 0 gives μ = m, which lies in Σ_m
        assert!(pts.iter().any(|p| p.is_exceptional() && (p.value - 1.0).abs() < 1e-15));
    }

    #[test]
    fn scalar_coupling_breaks_symmetry() {
        let (g, vs) = triangle();
        let pts = dirac_spectrum(&g, &vs, 0.7, 0.0, -6.0, 6.0).unwrap();
        let finite = expand(&pts);
        assert!(!finite.is_empty());
        let mirrored = finite.iter().all(|x| finite.iter().any(|y| (x + y).abs() < 1e-6));
        assert!(!mirrored);
        for p in pts.iter().filter(|p| !p.is_exceptional()) {
            assert!(p.residual < 1e-9);
        }
    }

    #[test]
    fn sym_at_zero_mass_doubles_scalar_spectrum() {
        let (g, vs) = triangle();
        let sym = dirac_sym_spectrum(&g, &vs, 0.0, 0.5, 30.0).unwrap();
        let scalar = metric_spectrum_equilateral(&g, &vs, &Coupling::zero(3), 0.5, 30.0).unwrap();
        let finite_sym: Vec<&SymPoint> = sym.iter().filter(|p| !p.point.is_exceptional()).collect();
        let finite_scalar: Vec<&SpectralPoint> = scalar.iter().filter(|p| !p.is_exceptional()).collect();
        assert_eq!(finite_sym.len(), finite_scalar.len());
        for (a, b) in finite_sym.iter().zip(&finite_scalar) {
            assert!((a.point.value - b.value).abs() < 1e-9);
            assert_eq!(a.point.multiplicity, 2 * b.multiplicity);
        }
    }

    #[test]
    fn sym_unit_edge_with_mass() {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let pts = dirac_sym_spectrum(&g, &vs, 1.0, 1.0, 1.0 + PI * PI).unwrap();
        let zero_pair: Vec<&SymPoint> = pts.iter().filter(|p| p.pairs.contains(&(0.0, 0.0))).collect();
        assert!(!zero_pair.is_empty());
        for p in zero_pair {
            let l = p.point.value;
            assert!(l > 1.0 && l < 1.0 + PI * PI);
            assert!(sym_pair_function(l, 0.0, 0.0, 1.0).abs() <= 1e-10);
            // (cos μ − 1)² = (sin μ/μ)² with μ = √(λ − 1)
            let mu = (l - 1.0).sqrt();
            assert!(((mu.cos() - 1.0).powi(2) - (mu.sin() / mu).powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn dirichlet_triangle_has_only_exceptional_points() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::build(&g, &vec![SpaceDecl::Dirichlet; 3]).unwrap();
        let pts = dirac_spectrum(&g, &vs, 0.0, 0.0, -4.0, 4.0).unwrap();
        assert!(pts.iter().all(|p| p.is_exceptional()));
        assert_eq!(pts.len(), 3);
    }
}
