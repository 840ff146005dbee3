use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kneser-topo", version, about = "Build stable Kneser graphs and their complexes, and check their homology and chromatic numbers exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Output format for the data stream.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the data stream to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub max_elements: Option<usize>,
    #[arg(long, global = true)]
    pub max_simplices: Option<usize>,
    /// Largest graph handed to the exact coloring solver or the Hom-poset builder.
    #[arg(long, global = true)]
    pub vertex_budget: Option<usize>,
    /// Cap overrides such as `max_elements=5000,vertex_budget=40`; flags win over this.
    #[arg(long = "caps", global = true, env = "KNESER_TOPO_CAPS", hide = true)]
    pub caps_env: Option<String>,
    /// Worker threads for `grid`.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: usize,
    /// Stability vector as a comma list, e.g. `2,2,1`.
    #[arg(long)]
    pub s: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ncomplex,
    PairPoset,
    HomPoset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rules {
    /// Largest D and the set-difference test for the second stage.
    Default,
    /// Smallest D and the printed second-stage condition.
    AsWritten,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the stable k-subsets of [n].
    Enumerate(Instance),
    /// Build the stable Kneser graph.
    Graph(Instance),
    /// Build the neighborhood complex.
    Ncomplex(Instance),
    /// Build the pair poset P(n, k, s).
    PairPoset(Instance),
    /// Reduced integer homology of one of the complexes.
    Homology {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value_t = Target::Ncomplex)]
        target: Target,
        /// Also report unreduced Betti numbers.
        #[arg(long)]
        unreduced: bool,
    },
    /// Check that the neighborhood complex is a homology sphere of dimension n - Σ - 2.
    VerifyTheorem2(Instance),
    /// Check that the exact chromatic number is n - Σ.
    VerifyTheorem3(Instance),
    /// Run the complex comparison, operator chain, suspension and Morse pipeline checks.
    VerifyProofs {
        #[command(flatten)]
        instance: Instance,
        /// Expected target vector; must be s with its last entry replaced by 2.
        #[arg(long)]
        s_star: Option<String>,
        #[arg(long, value_enum, default_value_t = Rules::Default)]
        rules: Rules,
    },
    /// The (3,...,3,2) on [n-1] inside 3-stable on [n] lower bound.
    Corollary10 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
    },
    /// Table of checks over ranges of parameters.
    Grid(GridArgs),
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// `a..b` (inclusive) or a single value.
    #[arg(long)]
    pub n: String,
    #[arg(long, default_value = "2")]
    pub k: String,
    /// A stability vector; repeat for several. Defaults to every vector with entries up to `--s-max`.
    #[arg(long)]
    pub s: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub s_max: u32,
}
