use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sharptop_core::duality::{FamilyShape, NormKind};

use crate::config::Overrides;

#[derive(Debug, Parser)]
#[command(name = "sharptop", version, about = "Sharp topologies on generalized numbers and functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// ε-grid exponents: samples at ε = 2^-k for k in kmin..=kmax
    #[arg(long, global = true, value_name = "KMIN:KMAX")]
    pub grid: Option<String>,
    /// Spatial grid points per axis
    #[arg(long, global = true, value_name = "N")]
    pub spatial: Option<usize>,
    /// Valuation tolerance for agreement and stabilisation checks
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized probe sets
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write sampled data as CSV here
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            grid: self.grid.clone(),
            spatial: self.spatial,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
            csv: self.csv.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    #[value(alias = "euclidean")]
    Euclid,
    Max,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Euclid => NormKind::Euclidean,
            NormArg::Max => NormKind::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    /// p_{K,k} on a compact box
    Omega,
    /// weighted Schwartz seminorm of order k
    Schwartz,
    /// tempered seminorm with derivative order k and weight exponent --weight
    Tau,
    /// infimum over p_{K,0..cap}
    Ginf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Finite,
    Scanned,
}

impl From<ShapeArg> for FamilyShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Finite => FamilyShape::Finite,
            ShapeArg::Scanned => FamilyShape::Scanned,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact valuation and |u|_e of a generalized number
    Val {
        #[arg(long)]
        net: String,
    },
    /// Sharp distance |u - v|_e
    Dist {
        #[arg(long)]
        net: String,
        #[arg(long)]
        other: String,
    },
    /// Moderate / negligible classification of a number or expression net
    Classify {
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        net: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, default_value_t = 10)]
        q_max: i64,
        /// Compact box for expression nets (default [0,1]^n)
        #[arg(long = "box", value_name = "LO:HI,...")]
        k_box: Option<String>,
        /// Highest derivative order consulted for expression nets
        #[arg(long, default_value_t = 2, conflicts_with = "zeroth_only")]
        orders: u32,
        /// Consult only the zeroth seminorm
        #[arg(long)]
        zeroth_only: bool,
    },
    /// A derivative seminorm of an expression net, sampled over the ε-grid
    Seminorm {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// Derivative order (cap for ginf)
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Weight exponent N for the tempered seminorm
        #[arg(long, default_value_t = 0)]
        weight: u32,
        #[arg(long = "box", value_name = "LO:HI,...")]
        k_box: Option<String>,
    },
    /// Gauge of a ball intersection at a generalized number
    Gauge {
        #[arg(long)]
        net: String,
        /// JSON list of balls {"weight","log_eta","shift"}
        #[arg(long)]
        balls: String,
        /// log η for the chain check
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        log_eta: String,
    },
    /// Sharp metric of a seminorm family
    Metric {
        #[arg(long)]
        net: String,
        #[arg(long)]
        other: String,
        /// JSON list of weights s, one seminorm |ε^s ·|_e each
        #[arg(long)]
        family: String,
    },
    /// Constructive limit of a Cauchy sequence
    Limit {
        /// JSON list of symbolic nets
        #[arg(long)]
        seq: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Polar gauge and membership for a finite set
    Polar {
        /// JSON list of vectors
        #[arg(long)]
        set: String,
        /// The vector v
        #[arg(long)]
        net: String,
    },
    /// Dual norm: closed form against probe estimate
    Dualnorm {
        #[arg(long)]
        functional: String,
        #[arg(long, value_enum, default_value = "euclid")]
        norm: NormArg,
        /// Random probes in addition to basis and sign vectors
        #[arg(long, default_value_t = 16)]
        probes: usize,
    },
    /// Hahn-Banach witness for a vector and its duality check
    Hahnbanach {
        #[arg(long)]
        net: String,
        #[arg(long, value_enum, default_value = "euclid")]
        norm: NormArg,
    },
    /// Representing vector of a functional, verified on random probes
    Recover {
        #[arg(long)]
        functional: String,
        #[arg(long, default_value_t = 32)]
        probes: usize,
    },
    /// Uniform bound of a family of functionals
    Ubound {
        /// JSON list of functionals
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value = "finite")]
        shape: ShapeArg,
        #[arg(long, value_enum, default_value = "euclid")]
        norm: NormArg,
        #[arg(long, default_value_t = 8)]
        probes: usize,
    },
    /// Convergence to 0 in the compactly supported space
    Gcconv {
        /// JSON list of {"expr","support"}
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 2)]
        j_max: u32,
        /// Half-widths of the probe cubes
        #[arg(long, default_value = "1,2,4,8", value_delimiter = ',')]
        radii: Vec<i64>,
    },
    /// Value of an expression net at a generalized point
    Pointval {
        #[arg(long)]
        expr: String,
        /// JSON {"coords":[net,…],"witness":"lo:hi,…"}
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 10)]
        q_max: i64,
    },
    /// Summary report for a number or expression net
    Report {
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        net: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long = "box", value_name = "LO:HI,...")]
        k_box: Option<String>,
        /// Highest derivative order for expression nets
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        q_max: i64,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Val { .. } => "val",
            Command::Dist { .. } => "dist",
            Command::Classify { .. } => "classify",
            Command::Seminorm { .. } => "seminorm",
            Command::Gauge { .. } => "gauge",
            Command::Metric { .. } => "metric",
            Command::Limit { .. } => "limit",
            Command::Polar { .. } => "polar",
            Command::Dualnorm { .. } => "dualnorm",
            Command::Hahnbanach { .. } => "hahnbanach",
            Command::Recover { .. } => "recover",
            Command::Ubound { .. } => "ubound",
            Command::Gcconv { .. } => "gcconv",
            Command::Pointval { .. } => "pointval",
            Command::Report { .. } => "report",
        }
    }
}
