use super::system::FemSystem;
use super::FemError;
use crate::graph::MetricGraph;
use crate::spectral::SpectralPoint;
use crate::vertex_space::{Coupling, VertexSpace};

/// One eigenvalue branch on three nested meshes `h`, `h/2`, `h/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub coarse: f64,
    pub fine: f64,
    pub finest: f64,
    /// `(4 λ_{h/2} − λ_h) / 3`.
    pub extrapolated: f64,
    /// `log₂((λ_h − λ*) / (λ_{h/2} − λ*))` with the extrapolated `λ*`; this
    /// equals 2 by construction and is kept for reference.
    pub order: f64,
    /// `log₂((λ_h − λ_{h/2}) / (λ_{h/2} − λ_{h/4}))`, the order actually
    /// observed across the three meshes.
    pub observed_order: f64,
}

impl ConvergenceReport {
    pub fn from_levels(coarse: f64, fine: f64, finest: f64) -> Self {
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        let order = ((coarse - extrapolated) / (fine - extrapolated)).log2();
        let observed_order = ((coarse - fine) / (fine - finest)).log2();
        Self {
            coarse,
            fine,
            finest,
            extrapolated,
            order,
            observed_order,
        }
    }

    /// Branches that converge too fast to measure have an undefined order.
    pub fn order_is_measurable(&self) -> bool {
        (self.coarse - self.fine).abs() > 1e-9 * (1.0 + self.coarse.abs())
    }
}

fn reports(levels: [&FemSystem; 3], indices: std::ops::Range<usize>) -> Result<Vec<ConvergenceReport>, FemError> {
    indices
        .map(|k| {
            Ok(ConvergenceReport::from_levels(
                levels[0].eigenvalue(k)?,
                levels[1].eigenvalue(k)?,
                levels[2].eigenvalue(k)?,
            ))
        })
        .collect()
}

/// Lowest `count` eigenvalues on meshes `h`, `h/2`, `h/4`, extrapolated.
/// `count` may not exceed a quarter of the coarse dimension.
pub fn fem_spectrum(
    g: &MetricGraph,
    vs: &VertexSpace,
    l: &Coupling,
    h: f64,
    count: usize,
) -> Result<Vec<ConvergenceReport>, FemError> {
    let coarse = FemSystem::assemble(g, vs, l, h)?;
    let limit = coarse.dim() / 4;
    if count > limit {
        return Err(FemError::CountTooLarge { count, limit });
    }
    let fine = coarse.refined();
    let finest = fine.refined();
    reports([&coarse, &fine, &finest], 0..count)
}

/// Extrapolated branches whose value may lie in `[lo, hi]`. Branches are
/// selected on the coarse mesh with some headroom, since conforming
/// approximations converge from above.
pub fn fem_spectrum_range(
    g: &MetricGraph,
    vs: &VertexSpace,
    l: &Coupling,
    h: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<ConvergenceReport>, FemError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(FemError::InvalidRange { lo, hi });
    }
    let coarse = FemSystem::assemble(g, vs, l, h)?;
    let fine = coarse.refined();
    let finest = fine.refined();
    let margin = |x: f64| 1e-2 * (1.0 + x.abs());
    let first = finest.count_below(lo - margin(lo));
    let last = coarse.count_below(hi + margin(hi)).min(coarse.dim());
    let all = reports([&coarse, &fine, &finest], first..last.max(first))?;
    Ok(all
        .into_iter()
        .filter(|r| r.extrapolated >= lo - margin(lo) && r.extrapolated <= hi + margin(hi))
        .collect())
}

/// `|a − b| ≤ tol · max(|b|, 1)`.
fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Extrapolated eigenvalues grouped into clusters; membership is decided on
/// the coarse values with width `1e-3 (1 + |λ|)`.
pub fn oracle_clusters(reports: &[ConvergenceReport]) -> Vec<(f64, usize)> {
    let mut sorted: Vec<&ConvergenceReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.coarse.total_cmp(&b.coarse));
    let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in sorted {
        match out.last_mut() {
            Some((members, last)) if (r.coarse - *last).abs() <= 1e-3 * (1.0 + last.abs()) => {
                members.push(r.extrapolated);
                *last = r.coarse;
            }
            _ => out.push((vec![r.extrapolated], r.coarse)),
        }
    }
    out.into_iter()
        .map(|(m, _)| (m.iter().sum::<f64>() / m.len() as f64, m.len()))
        .collect()
}

/// Outcome of checking one spectral point against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMatch {
    pub value: f64,
    pub multiplicity: usize,
    pub exceptional: bool,
    /// Matching extrapolated cluster, if any.
    pub oracle_value: Option<f64>,
    pub oracle_multiplicity: usize,
    /// `|λ − λ*| / max(|λ*|, 1)`.
    pub relative_error: f64,
    /// Non-exceptional points: value and multiplicity confirmed.
    /// Exceptional points: the oracle has an eigenvalue there.
    pub confirmed: bool,
}

/// Matches each spectral point with the extrapolated clusters at relative
/// tolerance `tol`. Exceptional candidates are resolved: they are confirmed
/// when an oracle cluster lies within the tolerance.
pub fn compare_with_oracle(points: &[SpectralPoint], reports: &[ConvergenceReport], tol: f64) -> Vec<OracleMatch> {
    let clusters = oracle_clusters(reports);
    points
        .iter()
        .map(|p| {
            let best = clusters
                .iter()
                .min_by(|a, b| (a.0 - p.value).abs().total_cmp(&(b.0 - p.value).abs()));
            let (oracle_value, oracle_multiplicity, relative_error) = match best {
                Some(&(v, k)) => (Some(v), k, (p.value - v).abs() / v.abs().max(1.0)),
                None => (None, 0, f64::INFINITY),
            };
            let near = oracle_value.is_some_and(|v| close(p.value, v, tol));
            let confirmed = if p.is_exceptional() {
                near
            } else {
                near && oracle_multiplicity == p.multiplicity
            };
            OracleMatch {
                value: p.value,
                multiplicity: p.multiplicity,
                exceptional: p.is_exceptional(),
                oracle_value: if near { oracle_value } else { None },
                oracle_multiplicity: if near { oracle_multiplicity } else { 0 },
                relative_error,
                confirmed,
            }
        })
        .collect()
}

/// Oracle clusters in `[lo, hi]` that no spectral point accounts for.
pub fn unmatched_oracle_values(
    points: &[SpectralPoint],
    reports: &[ConvergenceReport],
    lo: f64,
    hi: f64,
    tol: f64,
) -> Vec<(f64, usize)> {
    oracle_clusters(reports)
        .into_iter()
        .filter(|&(v, _)| v >= lo && v <= hi)
        .filter(|&(v, _)| !points.iter().any(|p| close(p.value, v, tol)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Source;
    use std::f64::consts::PI;

    #[test]
    fn neumann_interval_extrapolates() {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let reps = fem_spectrum(&g, &vs, &Coupling::zero(2), 1.0 / 64.0, 2).unwrap();
        assert!(reps[0].extrapolated.abs() < 1e-10);
        assert!((reps[1].extrapolated - PI * PI).abs() <= 1e-4);
        assert!(reps[1].observed_order > 1.6 && reps[1].observed_order < 2.4);
        assert!((reps[1].order - 2.0).abs() < 1e-6);
        assert!(!reps[0].order_is_measurable());
    }

    #[test]
    fn triangle_low_spectrum() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let reps = fem_spectrum(&g, &vs, &Coupling::zero(3), 1.0 / 64.0, 3).unwrap();
        let want = [0.0, (2.0 * PI / 3.0).powi(2), (2.0 * PI / 3.0).powi(2)];
        for (r, w) in reps.iter().zip(want) {
            assert!((r.extrapolated - w).abs() <= 1e-4 * w.max(1.0));
        }
        assert!(matches!(
            fem_spectrum(&g, &vs, &Coupling::zero(3), 1.0 / 4.0, 10),
            Err(FemError::CountTooLarge { .. })
        ));
    }

    #[test]
    fn path_resolves_exceptional_candidate() {
        let g = MetricGraph::path(&[1.0, 2.0]).unwrap();
        let vs = VertexSpace::standard(&g);
        let reps = fem_spectrum_range(&g, &vs, &Coupling::zero(3), 1.0 / 128.0, 0.5, 3.0).unwrap();
        let pts = vec![
            SpectralPoint::new((PI / 3.0).powi(2), 1, Source::Scan, 0.0),
            SpectralPoint::new(PI * PI / 4.0, 1, Source::ExceptionalCandidate, 0.0),
        ];
        let m = compare_with_oracle(&pts, &reps, 1e-4);
        assert!(m[0].confirmed);
        assert!(!m[1].confirmed);
        assert!(unmatched_oracle_values(&pts, &reps, 0.5, 3.0, 1e-4).is_empty());
    }

    #[test]
    fn neumann_pi_squared_is_an_eigenvalue() {
        let g = MetricGraph::single_edge(1.0).unwrap();
        let vs = VertexSpace::standard(&g);
        let reps = fem_spectrum_range(&g, &vs, &Coupling::zero(2), 1.0 / 128.0, 5.0, 12.0).unwrap();
        let pts = vec![SpectralPoint::new(PI * PI, 1, Source::ExceptionalCandidate, 0.0)];
        assert!(compare_with_oracle(&pts, &reps, 1e-4)[0].confirmed);
    }
}
