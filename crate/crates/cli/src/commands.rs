use std::fmt::Write;
use std::path::Path;

use num_complex::Complex64;
use qgraph::discrete::{assemble_d, delta0, delta1};
use qgraph::fem::{
    compare_with_oracle, fem_spectrum, fem_spectrum_range, oracle_clusters, ConvergenceReport, FemSystem,
};
use qgraph::graph::{parse_complex, parse_graph};
use qgraph::krein::{ab_parameters, q_general, scattering_matrix};
use qgraph::spectral::{
    dirac_spectrum, dirac_sym_spectrum, discrete_spectrum, eigenfunction, metric_spectrum_equilateral,
    metric_spectrum_scan, vertex_condition_residual, Source, SpectralPoint,
};
use qgraph::{Coupling, GraphDocument, VertexSpace};

use crate::args::{Basis, CouplingArg, Operator};
use crate::csv;
use crate::error::CliError;

/// Parsed graph file with its vertex space and coupling.
pub struct Problem {
    pub doc: GraphDocument,
    pub vs: VertexSpace,
    pub coupling: Coupling,
}

impl Problem {
    pub fn load(path: &Path, coupling: &CouplingArg) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let doc = parse_graph(&text)?;
        let vs = VertexSpace::build(&doc.graph, &doc.spaces)?;
        let coupling = match coupling.coupling_scalar {
            Some(c) if c.is_finite() => Coupling::scalar(c, vs.dim()),
            Some(c) => return Err(CliError::Input(format!("coupling constant must be finite, got {c}"))),
            None => Coupling::from_decl(&doc.coupling, vs.dim())?,
        };
        for w in vs.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(Self { doc, vs, coupling })
    }

    pub fn scalar_coupling(&self) -> Result<f64, CliError> {
        self.coupling
            .as_scalar()
            .ok_or_else(|| CliError::Input("this command needs a scalar coupling (try --coupling-scalar)".into()))
    }
}

pub fn parse_z(text: &str) -> Result<Complex64, CliError> {
    parse_complex(text)
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .ok_or_else(|| CliError::Input(format!("invalid complex number '{text}'")))
}

pub fn check_range(lo: f64, hi: f64) -> Result<(), CliError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(CliError::Input(format!("invalid range [{lo}, {hi}]")))
    }
}

pub fn discrete(p: &Problem, operator: Operator, matrix: bool) -> Result<String, CliError> {
    let g = &p.doc.graph;
    if operator == Operator::D {
        return if matrix {
            Ok(csv::matrix(&assemble_d(g, &p.vs)))
        } else {
            Err(CliError::Input("the derivative is not square; use --matrix".into()))
        };
    }
    let lap = match operator {
        Operator::Delta0 => delta0(g, &p.vs),
        _ => delta1(g, &p.vs),
    };
    if matrix {
        Ok(csv::matrix(lap.matrix()))
    } else {
        Ok(csv::spectrum(&discrete_spectrum(&lap)?))
    }
}

pub fn spectrum(p: &Problem, lo: f64, hi: f64) -> Result<String, CliError> {
    check_range(lo, hi)?;
    let points = metric_spectrum_equilateral(&p.doc.graph, &p.vs, &p.coupling, lo, hi)?;
    Ok(csv::spectrum(&points))
}

pub fn scan(p: &Problem, lo: f64, hi: f64, grid: f64) -> Result<String, CliError> {
    check_range(lo, hi)?;
    let points = metric_spectrum_scan(&p.doc.graph, &p.vs, &p.coupling, lo, hi, grid)?;
    Ok(csv::spectrum(&points))
}

pub fn qfunction(p: &Problem, z: &str) -> Result<String, CliError> {
    let q = q_general(&p.doc.graph, &p.vs, parse_z(z)?)?;
    Ok(csv::matrix(&q.q))
}

pub fn scattering(p: &Problem, mu: f64, basis: Basis) -> Result<String, CliError> {
    let s = scattering_matrix(&p.vs, &p.coupling, mu)?;
    let s = match basis {
        Basis::Slot => s,
        Basis::Adapted => {
            let u = ab_parameters(&p.vs, &p.coupling)?.adapted_basis;
            u.adjoint().matmul(&s).matmul(&u)
        }
    };
    Ok(csv::matrix(&s))
}

pub fn dirac(p: &Problem, lo: f64, hi: f64, mass: Option<f64>) -> Result<String, CliError> {
    check_range(lo, hi)?;
    let m = mass.unwrap_or(p.doc.mass);
    let points = dirac_spectrum(&p.doc.graph, &p.vs, p.scalar_coupling()?, m, lo, hi)?;
    Ok(csv::spectrum(&points))
}

pub fn dirac_sym(p: &Problem, lo: f64, hi: f64, mass: Option<f64>) -> Result<String, CliError> {
    check_range(lo, hi)?;
    let m = mass.unwrap_or(p.doc.mass);
    let points: Vec<SpectralPoint> = dirac_sym_spectrum(&p.doc.graph, &p.vs, m, lo, hi)?
        .into_iter()
        .map(|s| s.point)
        .collect();
    Ok(csv::spectrum(&points))
}

pub fn eigenfunctions(p: &Problem, lambda: f64, samples: usize) -> Result<String, CliError> {
    if samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let fs = eigenfunction(&p.doc.graph, &p.vs, &p.coupling, lambda, samples)?;
    let mut out = String::new();
    let _ = writeln!(out, "# qgraph eigenfunction v{}", csv::SCHEMA_VERSION);
    for (k, f) in fs.iter().enumerate() {
        let _ = writeln!(
            out,
            "# function {k}: ode residual {}, vertex residual {}",
            csv::number(f.ode_residual(Complex64::new(lambda, 0.0))),
            csv::number(vertex_condition_residual(f, &p.vs, &p.coupling))
        );
    }
    out.push_str("function,edge,x,re,im,deriv_re,deriv_im\n");
    for (k, f) in fs.iter().enumerate() {
        for (e, edge) in p.doc.graph.edges().iter().enumerate() {
            for j in 0..=samples {
                let x = edge.length * j as f64 / samples as f64;
                let (v, d) = (f.values[e][j], f.derivatives[e][j]);
                let _ = writeln!(
                    out,
                    "{k},{},{},{},{},{},{}",
                    edge.id,
                    csv::number(x),
                    csv::number(v.re),
                    csv::number(v.im),
                    csv::number(d.re),
                    csv::number(d.im)
                );
            }
        }
    }
    Ok(out)
}

pub struct OracleRequest {
    pub h: f64,
    pub count: Option<usize>,
    pub range: Option<(f64, f64)>,
    pub resolve: Option<f64>,
    pub levels: bool,
}

fn oracle_points(reports: &[ConvergenceReport]) -> Vec<SpectralPoint> {
    oracle_clusters(reports)
        .into_iter()
        .map(|(value, k)| {
            // distance to the finest mesh as an error estimate
            let spread = reports
                .iter()
                .map(|r| (r.finest - value).abs())
                .fold(f64::INFINITY, f64::min);
            SpectralPoint::new(value, k, Source::Oracle, spread)
        })
        .collect()
}

pub fn oracle(p: &Problem, req: &OracleRequest) -> Result<String, CliError> {
    let g = &p.doc.graph;
    if let Some(lambda) = req.resolve {
        if !lambda.is_finite() {
            return Err(CliError::Input(format!("cannot resolve {lambda}")));
        }
        let margin = 1e-2 * (1.0 + lambda.abs());
        let reports = fem_spectrum_range(g, &p.vs, &p.coupling, req.h, lambda - margin, lambda + margin)?;
        let candidate = SpectralPoint::new(lambda, 1, Source::ExceptionalCandidate, 0.0);
        let m = &compare_with_oracle(&[candidate], &reports, 1e-4)[0];
        let point = SpectralPoint::new(lambda, m.oracle_multiplicity, Source::Oracle, m.relative_error);
        return Ok(csv::spectrum(&[point]));
    }
    let reports = match (req.count, req.range) {
        (_, Some((lo, hi))) => {
            check_range(lo, hi)?;
            fem_spectrum_range(g, &p.vs, &p.coupling, req.h, lo, hi)?
        }
        (Some(count), None) => fem_spectrum(g, &p.vs, &p.coupling, req.h, count)?,
        (None, None) => {
            let dim = FemSystem::assemble(g, &p.vs, &p.coupling, req.h)?.dim();
            fem_spectrum(g, &p.vs, &p.coupling, req.h, (dim / 4).min(10))?
        }
    };
    if req.levels {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .enumerate()
            .map(|(k, r)| {
                vec![
                    k.to_string(),
                    csv::number(r.coarse),
                    csv::number(r.fine),
                    csv::number(r.finest),
                    csv::number(r.extrapolated),
                    if r.order_is_measurable() {
                        csv::number(r.observed_order)
                    } else {
                        "nan".into()
                    },
                ]
            })
            .collect();
        let columns = ["branch", "coarse", "fine", "finest", "extrapolated", "observed_order"];
        return Ok(csv::table("oracle-levels", &columns, &rows));
    }
    Ok(csv::spectrum(&oracle_points(&reports)))
}
