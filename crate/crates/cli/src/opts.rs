use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kahan-aromas", version, about = "Preserved measures of Kahan's method via aromatic series")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Largest order accepted without --allow-high-order.
    #[arg(long, global = true, default_value_t = 6)]
    pub order_cap: usize,

    /// Accept orders above the cap.
    #[arg(long, global = true)]
    pub allow_high_order: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
    Latex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Aromas and their symmetry coefficients.
    #[command(subcommand)]
    Aromas(AromasCmd),
    /// Aromatic functions of a field.
    #[command(subcommand)]
    Field(FieldCmd),
    /// The Kahan map of a field.
    #[command(subcommand)]
    Kahan(KahanCmd),
    /// Coalgebra tables.
    #[command(subcommand)]
    Hopf(HopfCmd),
    /// Densities of preserved measures.
    #[command(subcommand)]
    Darboux(DarbouxCmd),
    /// Necessary conditions and the conjectured density.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Built-in example systems.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

/// Exactly one of a field file or a built-in system.
#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct FieldSource {
    /// Field JSON file.
    #[arg(long, group = "source")]
    pub field: Option<PathBuf>,
    /// Built-in system name (see `corpus list`).
    #[arg(long, group = "source")]
    pub system: Option<String>,
}

#[derive(Args, Debug)]
pub struct SystemParams {
    /// Parameters of a built-in system as JSON; a seeded draw if absent.
    #[arg(long, requires = "system")]
    pub params: Option<String>,
    /// Seed for random parameters and the solver's sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum AromasCmd {
    /// List aromas (or aroma multisets) of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        multisets: bool,
        /// Keep only those with every in-degree at most this.
        #[arg(long)]
        max_indegree: Option<usize>,
    },
    /// Symmetry coefficient of an encoded aroma multiset.
    Sigma { encoding: String },
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Evaluate the aromatic function of an encoded multiset.
    Eval {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
        #[arg(long)]
        aroma: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum KahanCmd {
    /// Components over the common denominator det(I - h/2 f').
    Map {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
    },
    /// Jacobian determinant of the map.
    Det {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
    },
    /// Expansion of the map in powers of h.
    Series {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum HopfCmd {
    /// Linear forms of the Q map on every multiset up to an order.
    QTable {
        #[arg(long)]
        order: usize,
        /// Keep only multisets with every in-degree at most this.
        #[arg(long)]
        max_indegree: Option<usize>,
    },
    /// Aromatic expansion of det(I + u h f').
    Newton {
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum DarbouxCmd {
    /// Find every density in the aromatic span up to an order.
    Solve {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ParityArg::Even)]
        parity: ParityArg,
        /// JSON list of {"label", "polynomial"} multipliers for the span.
        #[arg(long)]
        augment: Option<PathBuf>,
    },
    /// Check a density exactly.
    Verify {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
        /// Serialized polynomial over (x, h), or a solver report.
        #[arg(long)]
        density: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    Conditions {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
    },
    Conjecture {
        #[command(flatten)]
        source: FieldSource,
        #[command(flatten)]
        params: SystemParams,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    /// Names, descriptions and parameters of the built-in systems.
    List,
    /// Print a built-in system as field JSON.
    Field {
        name: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a system against its stored expectations.
    Run {
        name: String,
        /// Redraw random parameters with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}
