use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spectra of Laplace and Dirac operators on metric graphs.
#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph description file.
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct RangeArg {
    /// Spectral window `lo hi`.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
    pub range: Vec<f64>,
}

impl RangeArg {
    pub fn bounds(&self) -> (f64, f64) {
        (self.range[0], self.range[1])
    }
}

#[derive(Debug, Default, Args)]
pub struct CouplingArg {
    /// Replace the coupling of the file by `c I`.
    #[arg(long, allow_negative_numbers = true)]
    pub coupling_scalar: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    /// `Δ_𝒢 = d* d` on the vertex space.
    Delta0,
    /// `d d*` on edge space.
    Delta1,
    /// The derivative `d` itself.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// Vertex space first, then its complement.
    Adapted,
    /// Endpoint slots in canonical order.
    Slot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Supersymmetry,
    QHermiticity,
    Nevanlinna,
    Resolvent,
    GammaCovariance,
    NormBounds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum (or matrix) of the discrete Laplacian.
    Discrete {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Operator::Delta0)]
        operator: Operator,
        /// Print the matrix instead of its spectrum.
        #[arg(long)]
        matrix: bool,
    },
    /// Metric spectrum of a unit graph with scalar coupling via the transfer map.
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        range: RangeArg,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// Metric spectrum by counting eigenvalue crossings of `Q(λ) − L`.
    Scan {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        range: RangeArg,
        /// Grid points per unit of λ.
        #[arg(long, default_value_t = qgraph::spectral::DEFAULT_GRID)]
        grid: f64,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// The Q-function at a complex point.
    Qfunction {
        #[command(flatten)]
        graph: GraphArg,
        /// Spectral parameter, e.g. `2`, `-1+0.5i`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Scattering matrix `S(μ)`.
    Scattering {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        mu: f64,
        #[arg(long, value_enum, default_value_t = Basis::Adapted)]
        basis: Basis,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// Dirac spectrum with scalar coupling `M₀` on a unit graph.
    Dirac {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        range: RangeArg,
        /// Mass; defaults to the value in the file.
        #[arg(long, allow_negative_numbers = true)]
        mass: Option<f64>,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// Spectrum of the square of the symmetric-component Dirac operator.
    DiracSym {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        range: RangeArg,
        #[arg(long, allow_negative_numbers = true)]
        mass: Option<f64>,
    },
    /// Eigenfunctions at an eigenvalue, sampled along every edge.
    Eigenfunction {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Sample intervals per edge.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// Finite-element eigenvalues with Richardson extrapolation.
    Oracle {
        #[command(flatten)]
        graph: GraphArg,
        /// Coarse mesh size; `h/2` and `h/4` are used as well.
        #[arg(long, default_value_t = qgraph::fem::DEFAULT_H)]
        h: f64,
        /// Number of lowest eigenvalues.
        #[arg(long, conflicts_with = "range")]
        count: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        range: Option<Vec<f64>>,
        /// Decide whether this value is an eigenvalue, and with which multiplicity.
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["count", "range"])]
        resolve: Option<f64>,
        /// Print every branch on the three meshes instead of clusters.
        #[arg(long)]
        levels: bool,
        #[command(flatten)]
        coupling: CouplingArg,
    },
    /// Numerical checks of structural identities.
    Check {
        #[arg(value_enum)]
        name: CheckName,
        #[command(flatten)]
        graph: GraphArg,
        /// Seed for random test data.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Spectral parameter for the resolvent check.
        #[arg(long, allow_hyphen_values = true, default_value = "-2")]
        z: String,
        /// Mesh size for checks that use finite elements.
        #[arg(long, default_value_t = qgraph::fem::DEFAULT_H)]
        h: f64,
        #[command(flatten)]
        coupling: CouplingArg,
    },
}
