use std::f64::consts::PI;

use num_complex::Complex64;
use qgraph::discrete::{assemble_d, check_supersymmetry, delta0};
use qgraph::fem::{fem_dirichlet_resolvent_apply, fem_resolvent_apply, FemSystem};
use qgraph::krein::{beta_adjoint_apply, beta_apply, q_general, KreinError, QFunction};
use qgraph::linalg::{hermitian_eig, ComplexMatrix, HermitianMatrix, LuFactorization};
use qgraph::random::{random_complex_vec, seeded_rng};
use rand::Rng;

use crate::args::CheckName;
use crate::commands::Problem;
use crate::csv::{list, number};
use crate::error::CliError;

pub type CheckRow = (String, bool, String);

pub struct CheckOptions {
    pub seed: u64,
    pub z: Complex64,
    pub h: f64,
}

/// Samples per edge for sampled functions.
const SAMPLES: usize = 400;

pub fn run(name: CheckName, p: &Problem, opts: &CheckOptions) -> Result<Vec<CheckRow>, CliError> {
    match name {
        CheckName::Supersymmetry => supersymmetry(p),
        CheckName::QHermiticity => q_hermiticity(p, opts),
        CheckName::Nevanlinna => nevanlinna(p, opts),
        CheckName::Resolvent => resolvent(p, opts),
        CheckName::GammaCovariance => gamma_covariance(p, opts),
        CheckName::NormBounds => norm_bounds(p),
    }
}

fn row(name: &str, pass: bool, detail: String) -> CheckRow {
    (name.to_string(), pass, detail)
}

fn supersymmetry(p: &Problem) -> Result<Vec<CheckRow>, CliError> {
    let r = check_supersymmetry(&p.doc.graph, &p.vs)?;
    let detail = format!(
        "dual {} vs 2 - primal {} (values 0 and 2 removed; tolerance 1e-8)",
        list(&r.dual),
        list(&r.reflected)
    );
    Ok(vec![row("supersymmetry", r.pass, detail)])
}

/// Q(z), or `None` inside a pole window.
fn q_or_pole(p: &Problem, z: Complex64) -> Result<Option<ComplexMatrix>, CliError> {
    match q_general(&p.doc.graph, &p.vs, z) {
        Ok(q) => Ok(Some(q.q)),
        Err(KreinError::PoleWindow { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn q_hermiticity(p: &Problem, opts: &CheckOptions) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = seeded_rng(opts.seed);
    let mut defect: f64 = 0.0;
    let mut evaluated = 0;
    for _ in 0..20 {
        if let Some(q) = q_or_pole(p, Complex64::new(rng.gen_range(-20.0..60.0), 0.0))? {
            defect = defect.max(q.sub(&q.adjoint()).max_abs());
            evaluated += 1;
        }
    }
    let at_zero = q_general(&p.doc.graph, &p.vs, Complex64::new(0.0, 0.0))?
        .q
        .sub(delta0(&p.doc.graph, &p.vs).matrix())
        .max_abs();
    Ok(vec![
        row(
            "q-hermiticity",
            defect <= 1e-10,
            format!("max |Q(λ) - Q(λ)*| = {} at {evaluated} real λ (tolerance 1e-10)", number(defect)),
        ),
        row(
            "q-at-zero",
            at_zero <= 1e-10,
            format!("max |Q(0) - Δ| = {} (tolerance 1e-10)", number(at_zero)),
        ),
    ])
}

fn anti_hermitian_eigenvalues(q: &ComplexMatrix) -> Result<Vec<f64>, CliError> {
    let im = q.sub(&q.adjoint()).scale(Complex64::new(0.0, -0.5));
    Ok(hermitian_eig(&HermitianMatrix::new(im)?)?.eigenvalues)
}

fn nevanlinna(p: &Problem, opts: &CheckOptions) -> Result<Vec<CheckRow>, CliError> {
    let g = &p.doc.graph;
    let mut rng = seeded_rng(opts.seed);
    let (mut lowest, mut highest) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..20 {
        let z = Complex64::new(rng.gen_range(-10.0..40.0), rng.gen_range(0.1..5.0));
        let eig = anti_hermitian_eigenvalues(&q_general(g, &p.vs, z)?.q)?;
        if let (Some(&a), Some(&b)) = (eig.first(), eig.last()) {
            lowest = lowest.min(a);
            highest = highest.max(b);
        }
    }
    let range = format!("[{}, {}]", number(lowest), number(highest));

    let qf = QFunction::new(g, &p.vs);
    let (lo, hi) = (-5.0, (PI / g.max_length()).powi(2) - 0.5);
    let mut branches = Vec::with_capacity(100);
    for j in 0..100 {
        let lambda = lo + (hi - lo) * j as f64 / 99.0;
        branches.push(hermitian_eig(&qf.eval_real(lambda)?)?.eigenvalues);
    }
    let (mut up, mut down, mut total) = (0, 0, 0);
    for w in branches.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            total += 1;
            up += usize::from(b > a);
            down += usize::from(b < a);
        }
    }
    let grid = format!("100-point grid on [{}, {}]", number(lo), number(hi));
    Ok(vec![
        row(
            "nevanlinna",
            lowest >= -1e-10,
            format!("anti-Hermitian part of Q(z) over 20 z with Im z > 0 has eigenvalues in {range}; PSD required"),
        ),
        row(
            "anti-nevanlinna",
            highest <= 1e-10,
            format!("same eigenvalues {range}; NSD required"),
        ),
        row(
            "branches-increasing",
            up == total,
            format!("{up} of {total} branch steps increase on the {grid}"),
        ),
        row(
            "branches-decreasing",
            down == total,
            format!("{down} of {total} branch steps decrease on the {grid}"),
        ),
    ])
}

/// Smooth random function on each edge, sampled at `n + 1` points.
fn smooth_rhs<R: Rng>(rng: &mut R, lengths: &[f64], n: usize) -> Vec<Vec<Complex64>> {
    lengths
        .iter()
        .map(|&len| {
            let a = random_complex_vec(rng, 4);
            (0..=n)
                .map(|j| {
                    let x = len * j as f64 / n as f64;
                    a[0] + a[1] * (PI * x).cos() + a[2] * (2.0 * PI * x).sin() + a[3] * (x * x - 0.3)
                })
                .collect()
        })
        .collect()
}

fn sup_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn resolvent(p: &Problem, opts: &CheckOptions) -> Result<Vec<CheckRow>, CliError> {
    let g = &p.doc.graph;
    let z = opts.z;
    let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
    let rhs = smooth_rhs(&mut seeded_rng(opts.seed), &lengths, SAMPLES);

    let sys = FemSystem::assemble(g, &p.vs, &p.coupling, opts.h)?;
    let coupled = fem_resolvent_apply(&sys, z, &rhs, SAMPLES)?;
    let dirichlet = fem_dirichlet_resolvent_apply(g, opts.h, z, &rhs, SAMPLES)?;

    let adj = beta_adjoint_apply(g, &p.vs, z, &rhs)?;
    let q = q_general(g, &p.vs, z)?.q.sub(p.coupling.matrix().matrix());
    let coords = LuFactorization::new(&q)?.solve(&adj);
    let correction = beta_apply(g, &p.vs, z, &coords, SAMPLES)?;

    let one = Complex64::new(1.0, 0.0);
    let minus = sup_distance(&coupled.values, &dirichlet.combine(one, &correction, -one).values);
    let plus = sup_distance(&coupled.values, &dirichlet.combine(one, &correction, one).values);
    let at = format!("z = {}, h = {}", crate::csv::complex(z), number(opts.h));
    Ok(vec![
        row(
            "resolvent-minus",
            minus <= 1e-4,
            format!("sup |R_L g - R_0 g + β(Q - L)^-1 β* g| = {} at {at} (tolerance 1e-4)", number(minus)),
        ),
        row(
            "resolvent-plus",
            plus <= 1e-4,
            format!("sup |R_L g - R_0 g - β(Q - L)^-1 β* g| = {} at {at} (tolerance 1e-4)", number(plus)),
        ),
    ])
}

fn gamma_covariance(p: &Problem, opts: &CheckOptions) -> Result<Vec<CheckRow>, CliError> {
    let g = &p.doc.graph;
    let f = random_complex_vec(&mut seeded_rng(opts.seed), p.vs.dim());
    let z1 = opts.z;
    let z2 = z1 - 1.0;
    let u1 = beta_apply(g, &p.vs, z1, &f, SAMPLES)?;
    let u2 = beta_apply(g, &p.vs, z2, &f, SAMPLES)?;
    let r = fem_dirichlet_resolvent_apply(g, opts.h, z1, &u2.values, SAMPLES)?;
    let rebuilt = u2.combine(Complex64::new(1.0, 0.0), &r, z1 - z2);
    let err = sup_distance(&u1.values, &rebuilt.values);
    Ok(vec![row(
        "gamma-covariance",
        err <= 1e-4,
        format!(
            "sup |β(z1)F - β(z2)F - (z1 - z2)(Δ_0 - z1)^-1 β(z2)F| = {} for z1 = {}, z2 = {} (tolerance 1e-4)",
            number(err),
            crate::csv::complex(z1),
            crate::csv::complex(z2)
        ),
    )])
}

fn norm_bounds(p: &Problem) -> Result<Vec<CheckRow>, CliError> {
    let g = &p.doc.graph;
    let l0 = g.min_length();
    let d = assemble_d(g, &p.vs).operator_norm()?;
    let lap = hermitian_eig(&delta0(g, &p.vs))?
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let (bd, bl) = ((2.0 / l0).sqrt(), 2.0 / l0);
    Ok(vec![
        row(
            "norm-d",
            d <= bd + 1e-8,
            format!("|d| = {} <= sqrt(2/ℓ0) = {}", number(d), number(bd)),
        ),
        row(
            "norm-laplacian",
            lap <= bl + 1e-8,
            format!("|Δ| = {} <= 2/ℓ0 = {}", number(lap), number(bl)),
        ),
    ])
}
