use num_complex::Complex64;

use super::functions::eval_cs;
use super::{KreinError, POLE_WINDOW};
use crate::graph::{End, MetricGraph};
use crate::linalg::ComplexMatrix;
use crate::vertex_space::VertexSpace;

/// Function on a metric graph sampled at `N + 1` equispaced points per edge,
/// with its endpoint traces in global slot order.
#[derive(Debug, Clone)]
pub struct EigenfunctionSample {
    pub lengths: Vec<f64>,
    /// `values[e][j] = f_e(j ℓ_e / N)`.
    pub values: Vec<Vec<Complex64>>,
    /// `derivatives[e][j] = f_e'(j ℓ_e / N)`.
    pub derivatives: Vec<Vec<Complex64>>,
    /// Unoriented endpoint values f̄, one per slot.
    pub trace: Vec<Complex64>,
    /// Oriented derivative trace f⃗': `−f_e'(0)` at tails, `f_e'(ℓ_e)` at heads.
    pub oriented_derivative: Vec<Complex64>,
}

impl EigenfunctionSample {
    pub fn samples_per_edge(&self) -> usize {
        self.values.first().map_or(0, |v| v.len().saturating_sub(1))
    }

    /// Largest sampled modulus.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |−f'' − z f|` using the three-point second difference at
    /// interior samples.
    pub fn ode_residual(&self, z: Complex64) -> f64 {
        let mut worst: f64 = 0.0;
        for (vals, &l) in self.values.iter().zip(&self.lengths) {
            let n = vals.len() - 1;
            let h = l / n as f64;
            for j in 1..n {
                let second = (vals[j - 1] - vals[j] * 2.0 + vals[j + 1]) / (h * h);
                worst = worst.max((-second - z * vals[j]).norm());
            }
        }
        worst
    }

    /// `max |f_e(endpoint sample) − f̄(slot)|`.
    pub fn trace_consistency(&self, vs: &VertexSpace) -> f64 {
        let slots = vs.slots();
        let mut worst: f64 = 0.0;
        for (e, vals) in self.values.iter().enumerate() {
            let t = slots.index_of(e, End::Tail);
            let h = slots.index_of(e, End::Head);
            worst = worst.max((vals[0] - self.trace[t]).norm());
            worst = worst.max((vals[vals.len() - 1] - self.trace[h]).norm());
        }
        worst
    }

    /// Coordinates of the projected trace `E* f̄` in the 𝒢-basis.
    pub fn trace_coordinates(&self, vs: &VertexSpace) -> Vec<Complex64> {
        vs.embedding().adjoint().mul_vec(&self.trace)
    }

    /// Coordinates of `P f⃗'` in the 𝒢-basis.
    pub fn derivative_coordinates(&self, vs: &VertexSpace) -> Vec<Complex64> {
        vs.embedding().adjoint().mul_vec(&self.oriented_derivative)
    }

    /// Euclidean norm of the component of f̄ orthogonal to 𝒢.
    pub fn trace_defect(&self, vs: &VertexSpace) -> f64 {
        let e = vs.embedding();
        let back = e.mul_vec(&e.adjoint().mul_vec(&self.trace));
        self.trace.iter().zip(&back).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Linear combination `a self + b other` (same sampling).
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let zip = |x: &Vec<Vec<Complex64>>, y: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
            x.iter()
                .zip(y)
                .map(|(p, q)| p.iter().zip(q).map(|(u, v)| a * u + b * v).collect())
                .collect()
        };
        let zip1 = |x: &Vec<Complex64>, y: &Vec<Complex64>| -> Vec<Complex64> {
            x.iter().zip(y).map(|(u, v)| a * u + b * v).collect()
        };
        Self {
            lengths: self.lengths.clone(),
            values: zip(&self.values, &other.values),
            derivatives: zip(&self.derivatives, &other.derivatives),
            trace: zip1(&self.trace, &other.trace),
            oriented_derivative: zip1(&self.oriented_derivative, &other.oriented_derivative),
        }
    }
}

/// `⟨f, g⟩ = Σ_e ∫ conj(f_e) g_e` by the composite trapezoid rule.
pub fn l2_inner(f: &[Vec<Complex64>], g: &[Vec<Complex64>], lengths: &[f64]) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for ((fe, ge), &l) in f.iter().zip(g).zip(lengths) {
        let n = fe.len() - 1;
        let h = l / n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            sum += fe[j].conj() * ge[j] * w;
        }
        total += sum * h;
    }
    total
}

fn check_poles(g: &MetricGraph, z: Complex64) -> Result<(), KreinError> {
    let edges: Vec<u64> = g
        .edges()
        .iter()
        .filter(|e| eval_cs(z * (e.length * e.length)).1.norm() <= POLE_WINDOW)
        .map(|e| e.id)
        .collect();
    if edges.is_empty() {
        Ok(())
    } else {
        Err(KreinError::PoleWindow { z, edges })
    }
}

/// Samples `f = β(z) F` for `F` in 𝒢-coordinates.
///
/// On edge `e` with endpoint values `F_t`, `F_h`:
/// `f(x) = [F_t (ℓ−x) s(z(ℓ−x)²) + F_h x s(z x²)] / (ℓ s(z ℓ²))`,
/// `f'(x) = [−F_t c(z(ℓ−x)²) + F_h c(z x²)] / (ℓ s(z ℓ²))`.
pub fn beta_apply(
    g: &MetricGraph,
    vs: &VertexSpace,
    z: Complex64,
    coords: &[Complex64],
    samples: usize,
) -> Result<EigenfunctionSample, KreinError> {
    if coords.len() != vs.dim() {
        return Err(KreinError::Dimension(format!(
            "vector of length {} for a vertex space of dimension {}",
            coords.len(),
            vs.dim()
        )));
    }
    if samples == 0 {
        return Err(KreinError::Dimension("need at least one sample interval per edge".into()));
    }
    check_poles(g, z)?;
    let emb = vs.embedding();
    beta_apply_slots(g, vs, z, &emb.mul_vec(coords), samples)
}

/// Same as [`beta_apply`] with endpoint values given per slot.
fn beta_apply_slots(
    g: &MetricGraph,
    vs: &VertexSpace,
    z: Complex64,
    slot_values: &[Complex64],
    samples: usize,
) -> Result<EigenfunctionSample, KreinError> {
    let slots = vs.slots();
    let n = samples;
    let mut values = Vec::with_capacity(g.edge_count());
    let mut derivatives = Vec::with_capacity(g.edge_count());
    let mut oriented = vec![Complex64::new(0.0, 0.0); slots.slot_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        let l = edge.length;
        let t = slots.index_of(e, End::Tail);
        let h = slots.index_of(e, End::Head);
        let (ft, fh) = (slot_values[t], slot_values[h]);
        let denom = eval_cs(z * (l * l)).1 * l;
        let mut vals = Vec::with_capacity(n + 1);
        let mut ders = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let x = l * j as f64 / n as f64;
            let y = l - x;
            let (cy, sy) = eval_cs(z * (y * y));
            let (cx, sx) = eval_cs(z * (x * x));
            vals.push((ft * sy * y + fh * sx * x) / denom);
            ders.push((-ft * cy + fh * cx) / denom);
        }
        oriented[t] = -ders[0];
        oriented[h] = ders[n];
        values.push(vals);
        derivatives.push(ders);
    }
    Ok(EigenfunctionSample {
        lengths: g.edges().iter().map(|e| e.length).collect(),
        values,
        derivatives,
        trace: slot_values.to_vec(),
        oriented_derivative: oriented,
    })
}

/// Dirac boundary-value map: first component `f = β(w² − m²) F`, second
/// component `f' / (w + m)`.
#[derive(Debug, Clone)]
pub struct DiracSample {
    pub first: EigenfunctionSample,
    pub second: Vec<Vec<Complex64>>,
}

pub fn beta_dirac_apply(
    g: &MetricGraph,
    vs: &VertexSpace,
    w: Complex64,
    m: f64,
    coords: &[Complex64],
    samples: usize,
) -> Result<DiracSample, KreinError> {
    let denom = w + m;
    if denom.norm() <= 1e-14 * (1.0 + m.abs()) {
        return Err(KreinError::DiracPole { w });
    }
    let first = beta_apply(g, vs, w * w - m * m, coords, samples)?;
    let second = first
        .derivatives
        .iter()
        .map(|d| d.iter().map(|x| x / denom).collect())
        .collect();
    Ok(DiracSample { first, second })
}

/// `β(z̄)* u` in 𝒢-coordinates: component `k` is `⟨β(z̄) b_k, u⟩`, computed
/// by trapezoid quadrature on the sampling grid of `u`.
pub fn beta_adjoint_apply(
    g: &MetricGraph,
    vs: &VertexSpace,
    z: Complex64,
    u: &[Vec<Complex64>],
) -> Result<Vec<Complex64>, KreinError> {
    let samples = u.first().map_or(1, |v| v.len().saturating_sub(1)).max(1);
    let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
    let id = ComplexMatrix::identity(vs.dim());
    (0..vs.dim())
        .map(|k| {
            let b = beta_apply(g, vs, z.conj(), &id.column(k), samples)?;
            Ok(l2_inner(&b.values, u, &lengths))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SpaceDecl;
    use crate::krein::q_general;
    use crate::linalg::vec_norm;
    use crate::random::{random_complex_vec, random_document, seeded_rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_energy_is_linear_interpolation() {
        let g = MetricGraph::single_edge(2.0).unwrap();
        let vs = VertexSpace::build(&g, &[SpaceDecl::Neumann, SpaceDecl::Neumann]).unwrap();
        // slot values 1 at the tail, 0 at the head
        let f = beta_apply(&g, &vs, c(0.0), &[c(1.0), c(0.0)], 8).unwrap();
        for (j, v) in f.values[0].iter().enumerate() {
            let x = 2.0 * j as f64 / 8.0;
            assert!((v - c(1.0 - x / 2.0)).norm() < 1e-15);
        }
        assert!(f.derivatives[0].iter().all(|d| (d - c(-0.5)).norm() < 1e-15));
    }

    #[test]
    fn trace_reproduces_input_and_derivative_trace_gives_q() {
        let mut rng = seeded_rng(12);
        for _ in 0..10 {
            let doc = random_document(&mut rng, 5, false);
            let vs = VertexSpace::build(&doc.graph, &doc.spaces).unwrap();
            let z = Complex64::new(2.3, 0.4);
            let coords = random_complex_vec(&mut rng, vs.dim());
            let f = beta_apply(&doc.graph, &vs, z, &coords, 16).unwrap();
            let back = f.trace_coordinates(&vs);
            let diff: Vec<Complex64> = back.iter().zip(&coords).map(|(a, b)| a - b).collect();
            assert!(vec_norm(&diff) < 1e-12);
            assert!(f.trace_consistency(&vs) < 1e-12);
            assert!(f.trace_defect(&vs) < 1e-12);

            let q = q_general(&doc.graph, &vs, z).unwrap();
            let qf = q.q.mul_vec(&coords);
            let pd = f.derivative_coordinates(&vs);
            let diff: Vec<Complex64> = qf.iter().zip(&pd).map(|(a, b)| a - b).collect();
            assert!(vec_norm(&diff) < 1e-10 * (1.0 + vec_norm(&qf)));
        }
    }

    #[test]
    fn ode_residual_on_triangle() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let z = c(2.3);
        let f = beta_apply(&g, &vs, z, &[c(1.0), c(-0.5), Complex64::new(0.2, 0.7)], 400).unwrap();
        assert!(f.ode_residual(z) <= 1e-3, "{}", f.ode_residual(z));
    }

    #[test]
    fn dirac_second_component() {
        let g = MetricGraph::cycle(3);
        let vs = VertexSpace::standard(&g);
        let coords = [c(1.0), c(0.0), c(0.0)];
        let d = beta_dirac_apply(&g, &vs, c(1.5), 1.0, &coords, 10).unwrap();
        let f = beta_apply(&g, &vs, c(1.25), &coords, 10).unwrap();
        for (a, b) in d.second.iter().flatten().zip(f.derivatives.iter().flatten()) {
            assert!((a * 2.5 - b).norm() < 1e-14);
        }
    }

    #[test]
    fn inner_product_is_exact_for_linear_functions() {
        let lengths = [1.0, 2.0];
        let f: Vec<Vec<Complex64>> = lengths
            .iter()
            .map(|&l| (0..=4).map(|j| c(l * j as f64 / 4.0)).collect())
            .collect();
        let one: Vec<Vec<Complex64>> = lengths.iter().map(|_| vec![c(1.0); 5]).collect();
        // ∫_0^1 x + ∫_0^2 x = 0.5 + 2
        assert!((l2_inner(&f, &one, &lengths) - c(2.5)).norm() < 1e-15);
    }
}
