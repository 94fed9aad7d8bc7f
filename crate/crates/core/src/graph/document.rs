//! Line-oriented graph description format.
//!
//! ```text
//! # triangle with Kirchhoff conditions
//! vertices 3
//! edge 0 0 1 1.0
//! edge 1 1 2 1.0
//! edge 2 2 0 1.0
//! space 0 standard
//! coupling scalar 0.5
//! mass 1
//! ```
//!
//! `space <v> custom <dim>` and `coupling dense <dim>` are followed by
//! `<dim>` lines of complex tokens (`1.5`, `0.5+2i`, `-1-0.25i`).

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Edge, GraphError, MetricGraph};

/// Raw per-vertex space declaration.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceDecl {
    Standard,
    Dirichlet,
    Neumann,
    /// Spanning rows in canonical slot order; need not be orthonormal.
    Custom(Vec<Vec<Complex64>>),
}

/// Raw coupling declaration, interpreted in the global basis of the vertex space.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingDecl {
    Zero,
    Scalar(f64),
    Dense(Vec<Vec<Complex64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDocument {
    pub graph: MetricGraph,
    /// One entry per vertex; vertices without a `space` line are standard.
    pub spaces: Vec<SpaceDecl>,
    pub coupling: CouplingDecl,
    pub mass: f64,
}

impl GraphDocument {
    /// Standard conditions everywhere, zero coupling, zero mass.
    pub fn standard(graph: MetricGraph) -> Self {
        let n = graph.vertex_count();
        Self {
            graph,
            spaces: vec![SpaceDecl::Standard; n],
            coupling: CouplingDecl::Zero,
            mass: 0.0,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a complex token: `<real>`, `<real>+<real>i` or `<real>-<real>i`.
/// A bare imaginary part (`2i`, `-i`) is also accepted.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(t).map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not part of an exponent and not leading.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, parse_imag(&body[k..])?),
        None => (0.0, parse_imag(body)?),
    };
    Some(Complex64::new(re, im))
}

fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    }
}

/// Formats a complex number in the token grammar accepted by [`parse_complex`].
/// The output round-trips exactly.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    /// Next non-empty line with comments stripped, as (1-based number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, GraphError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what} (non-negative integer), found '{tok}'")))
}

fn parse_f64(line: usize, tok: &str, what: &str) -> Result<f64, GraphError> {
    parse_real(tok).ok_or_else(|| syntax(line, format!("expected {what} (real number), found '{tok}'")))
}

fn expect_len(line: usize, tokens: &[&str], n: usize, usage: &str) -> Result<(), GraphError> {
    if tokens.len() != n {
        return Err(syntax(line, format!("expected '{usage}'")));
    }
    Ok(())
}

fn read_rows(
    lines: &mut Lines<'_>,
    header_line: usize,
    count: usize,
) -> Result<Vec<(usize, Vec<Complex64>)>, GraphError> {
    let mut rows = Vec::with_capacity(count);
    for r in 0..count {
        let (line, tokens) = lines
            .next_tokens()
            .ok_or_else(|| syntax(header_line, format!("expected {count} matrix rows, found {r}")))?;
        let row = tokens
            .iter()
            .map(|t| parse_complex(t).ok_or_else(|| syntax(line, format!("invalid complex token '{t}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((line, row));
    }
    Ok(rows)
}

/// Parses and validates a graph description document.
pub fn parse_graph(text: &str) -> Result<GraphDocument, GraphError> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let mut vertex_count: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut spaces: Vec<(usize, usize, SpaceDecl)> = Vec::new();
    let mut coupling: Option<CouplingDecl> = None;
    let mut mass: Option<f64> = None;

    while let Some((line, tokens)) = lines.next_tokens() {
        match tokens[0] {
            "vertices" => {
                expect_len(line, &tokens, 2, "vertices <n>")?;
                if vertex_count.is_some() {
                    return Err(syntax(line, "'vertices' declared twice"));
                }
                let n = parse_usize(line, tokens[1], "vertex count")?;
                if n == 0 {
                    return Err(syntax(line, "vertex count must be positive"));
                }
                vertex_count = Some((line, n));
            }
            "edge" => {
                expect_len(line, &tokens, 5, "edge <id> <tail> <head> <length>")?;
                let id = tokens[1]
                    .parse::<u64>()
                    .map_err(|_| syntax(line, format!("invalid edge id '{}'", tokens[1])))?;
                let tail = parse_usize(line, tokens[2], "tail vertex")?;
                let head = parse_usize(line, tokens[3], "head vertex")?;
                let length = parse_f64(line, tokens[4], "edge length")?;
                if edges.iter().any(|(_, e)| e.id == id) {
                    return Err(GraphError::DuplicateEdge(id));
                }
                edges.push((line, Edge::new(id, tail, head, length)));
            }
            "space" => {
                if tokens.len() < 3 {
                    return Err(syntax(line, "expected 'space <vertex> standard|dirichlet|neumann|custom <dim>'"));
                }
                let v = parse_usize(line, tokens[1], "vertex")?;
                if spaces.iter().any(|(_, w, _)| *w == v) {
                    return Err(syntax(line, format!("space for vertex {v} declared twice")));
                }
                let decl = match tokens[2] {
                    "standard" | "dirichlet" | "neumann" => {
                        expect_len(line, &tokens, 3, "space <vertex> <kind>")?;
                        match tokens[2] {
                            "standard" => SpaceDecl::Standard,
                            "dirichlet" => SpaceDecl::Dirichlet,
                            _ => SpaceDecl::Neumann,
                        }
                    }
                    "custom" => {
                        expect_len(line, &tokens, 4, "space <vertex> custom <dim>")?;
                        let dim = parse_usize(line, tokens[3], "dimension")?;
                        let rows = read_rows(&mut lines, line, dim)?;
                        SpaceDecl::Custom(rows.into_iter().map(|(_, r)| r).collect())
                    }
                    other => return Err(syntax(line, format!("unknown space kind '{other}'"))),
                };
                spaces.push((line, v, decl));
            }
            "coupling" => {
                if coupling.is_some() {
                    return Err(syntax(line, "'coupling' declared twice"));
                }
                let decl = match tokens.get(1).copied() {
                    Some("zero") => {
                        expect_len(line, &tokens, 2, "coupling zero")?;
                        CouplingDecl::Zero
                    }
                    Some("scalar") => {
                        expect_len(line, &tokens, 3, "coupling scalar <c>")?;
                        CouplingDecl::Scalar(parse_f64(line, tokens[2], "coupling constant")?)
                    }
                    Some("dense") => {
                        expect_len(line, &tokens, 3, "coupling dense <dim>")?;
                        let dim = parse_usize(line, tokens[2], "dimension")?;
                        let rows = read_rows(&mut lines, line, dim)?;
                        if let Some((l, r)) = rows.iter().find(|(_, r)| r.len() != dim) {
                            return Err(syntax(*l, format!("coupling row has {} entries, expected {dim}", r.len())));
                        }
                        CouplingDecl::Dense(rows.into_iter().map(|(_, r)| r).collect())
                    }
                    _ => return Err(syntax(line, "expected 'coupling zero|scalar <c>|dense <dim>'")),
                };
                coupling = Some(decl);
            }
            "mass" => {
                expect_len(line, &tokens, 2, "mass <m>")?;
                if mass.is_some() {
                    return Err(syntax(line, "'mass' declared twice"));
                }
                mass = Some(parse_f64(line, tokens[1], "mass")?);
            }
            other => return Err(syntax(line, format!("unknown directive '{other}'"))),
        }
    }

    let (_, n) = vertex_count.ok_or_else(|| syntax(1, "missing 'vertices' line"))?;
    let graph = MetricGraph::new(n, edges.iter().map(|(_, e)| *e).collect())?;
    let mut decls = vec![SpaceDecl::Standard; n];
    for (line, v, decl) in spaces {
        if v >= n {
            return Err(syntax(line, format!("space declared for vertex {v}, graph has {n} vertices")));
        }
        if let SpaceDecl::Custom(rows) = &decl {
            let deg = graph.degree(v);
            if let Some(r) = rows.iter().find(|r| r.len() != deg) {
                return Err(syntax(
                    line,
                    format!("custom row at vertex {v} has {} entries, degree is {deg}", r.len()),
                ));
            }
        }
        decls[v] = decl;
    }
    Ok(GraphDocument {
        graph,
        spaces: decls,
        coupling: coupling.unwrap_or(CouplingDecl::Zero),
        mass: mass.unwrap_or(0.0),
    })
}

fn write_rows(out: &mut String, rows: &[Vec<Complex64>]) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|z| format_complex(*z)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

/// Canonical text form: every vertex gets an explicit `space` line.
pub fn serialize_graph(doc: &GraphDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices {}", doc.graph.vertex_count());
    for e in doc.graph.edges() {
        let _ = writeln!(out, "edge {} {} {} {}", e.id, e.tail, e.head, e.length);
    }
    for (v, decl) in doc.spaces.iter().enumerate() {
        match decl {
            SpaceDecl::Standard => {
                let _ = writeln!(out, "space {v} standard");
            }
            SpaceDecl::Dirichlet => {
                let _ = writeln!(out, "space {v} dirichlet");
            }
            SpaceDecl::Neumann => {
                let _ = writeln!(out, "space {v} neumann");
            }
            SpaceDecl::Custom(rows) => {
                let _ = writeln!(out, "space {v} custom {}", rows.len());
                write_rows(&mut out, rows);
            }
        }
    }
    match &doc.coupling {
        CouplingDecl::Zero => {
            let _ = writeln!(out, "coupling zero");
        }
        CouplingDecl::Scalar(c) => {
            let _ = writeln!(out, "coupling scalar {c}");
        }
        CouplingDecl::Dense(rows) => {
            let _ = writeln!(out, "coupling dense {}", rows.len());
            write_rows(&mut out, rows);
        }
    }
    let _ = writeln!(out, "mass {}", doc.mass);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "# unit triangle\nvertices 3\nedge 0 0 1 1.0\nedge 1 1 2 1.0\nedge 2 2 0 1.0  # closing edge\n";

    #[test]
    fn minimal_document() {
        let doc = parse_graph("vertices 2\nedge 0 0 1 1.0\n").unwrap();
        assert_eq!(doc.graph.edge_count(), 1);
        assert_eq!(doc.graph.edge(0).length, 1.0);
        assert_eq!(doc.spaces, vec![SpaceDecl::Standard; 2]);
        assert_eq!(doc.coupling, CouplingDecl::Zero);
        assert_eq!(doc.mass, 0.0);
    }

    #[test]
    fn triangle_degrees() {
        let doc = parse_graph(TRIANGLE).unwrap();
        assert!((0..3).all(|v| doc.graph.degree(v) == 2));
    }

    #[test]
    fn dangling_endpoint() {
        let err = parse_graph("vertices 3\nedge 0 0 5 1.0\nedge 1 1 2 1.0\n").unwrap_err();
        assert!(matches!(err, GraphError::DanglingEndpoint { vertex: 5, .. }));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_graph("vertices 2\n\nedge 0 0 one 1.0\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 3, .. }), "{err}");
        let err = parse_graph("vertices 2\nedge 0 0 1 1.0\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 3, .. }));
        let err = parse_graph("vertices 2\nedge 0 0 1 1.0\nspace 0 custom 1\n1 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 3, .. }));
    }

    #[test]
    fn duplicate_and_bad_length() {
        assert_eq!(
            parse_graph("vertices 2\nedge 4 0 1 1\nedge 4 1 0 1\n").unwrap_err(),
            GraphError::DuplicateEdge(4)
        );
        assert!(matches!(
            parse_graph("vertices 2\nedge 0 0 1 -1\n").unwrap_err(),
            GraphError::BadLength { .. }
        ));
        assert_eq!(
            parse_graph("vertices 3\nedge 0 0 1 1\n").unwrap_err(),
            GraphError::IsolatedVertex(2)
        );
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_complex("0.5+2i"), Some(Complex64::new(0.5, 2.0)));
        assert_eq!(parse_complex("-1-0.25i"), Some(Complex64::new(-1.0, -0.25)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Some(Complex64::new(1e-3, 20.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("3i"), Some(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("1+2j"), None);
        let z = Complex64::new(-0.1, -1.0 / 3.0);
        assert_eq!(parse_complex(&format_complex(z)), Some(z));
    }

    #[test]
    fn custom_space_and_dense_coupling() {
        let text = "vertices 2\nedge 0 0 1 1\nedge 1 0 1 0.5\nspace 0 custom 1\n1 1i\nspace 1 dirichlet\ncoupling dense 1\n2.5\nmass -0.5\n";
        let doc = parse_graph(text).unwrap();
        assert_eq!(
            doc.spaces[0],
            SpaceDecl::Custom(vec![vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]])
        );
        assert_eq!(doc.spaces[1], SpaceDecl::Dirichlet);
        assert_eq!(doc.coupling, CouplingDecl::Dense(vec![vec![Complex64::new(2.5, 0.0)]]));
        assert_eq!(doc.mass, -0.5);
    }

    #[test]
    fn serialize_round_trip() {
        let text = "vertices 2\nedge 3 1 0 0.7\nedge 1 0 1 1\nspace 0 custom 2\n1 0.5-0.5i\n0 1\nspace 1 neumann\ncoupling scalar -0.25\n";
        let doc = parse_graph(text).unwrap();
        let canonical = serialize_graph(&doc);
        let again = parse_graph(&canonical).unwrap();
        assert_eq!(again, doc);
        assert_eq!(serialize_graph(&again), canonical);
    }
}
