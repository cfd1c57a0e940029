use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Largest per-sort size bound accepted on the command line; searches grow
/// exponentially in it.
pub const MAX_BOUND: u64 = 32;

#[derive(Debug, Parser)]
#[command(name = "tclab", version, about = "Model search, witnesses and property checks for many-sorted theories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Theory selection shared by every subcommand that needs one.
#[derive(Debug, Clone, Args)]
pub struct TheoryArgs {
    /// Catalog name: teq, teq1, th, t2n, t1..t4, adds-t1..adds-t4, star.
    #[arg(long)]
    pub theory: Option<String>,
    /// Members of S, comma separated primes >= 7.
    #[arg(long, value_delimiter = ',', default_value = "7,11,13")]
    pub s_set: Vec<u64>,
    /// The oracle h: `parity`, a comma list of indices n with h(n) = 1, or a
    /// file holding such a list.
    #[arg(long, default_value = "parity")]
    pub h: String,
    /// Levels of the starting star interpretation.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=12))]
    pub star_n: u64,
}

/// A formula from a file (`-` for stdin) or inline text.
#[derive(Debug, Clone, Args)]
pub struct FormulaArgs {
    /// File holding one formula.
    pub file: Option<PathBuf>,
    /// The formula as text, instead of a file.
    #[arg(short = 'e', long = "formula", conflicts_with = "file")]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MmAlgo {
    /// Bounded brute-force search over size vectors.
    Brute,
    /// Arrangements of the strong witness's variables.
    FromDecision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecideVia {
    /// Bounded model search at the theory's complete size bound.
    Search,
    /// Satisfiability of some arrangement of the strong witness.
    Witness,
    /// Reading off a minimal model of the first sort.
    Mm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessChoice {
    /// The witness the theory declares.
    Theory,
    /// Pads each cube with one variable per missing sort.
    Cycle,
    /// Arrangement-indexed disjunction with distinct padding.
    Shiny,
    /// Returns the formula unchanged.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Convexity,
    Si,
    Fsmooth,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Artifact {
    Table1,
    Venn,
}

fn bound_parser() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(1..=MAX_BOUND)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounded satisfiability: search for a model with every sort of size at
    /// most the bound (default: the theory's complete bound, else 6).
    Sat {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        #[arg(long, value_parser = bound_parser())]
        bound: Option<u64>,
    },
    /// Enumerate models of a formula up to the bound, smallest first, up to
    /// the symmetry reduction of the search.
    Models {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        #[arg(long, value_parser = bound_parser(), default_value_t = 4)]
        bound: u64,
        /// Stop after this many models.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Minimal model function: the antichain of minimal cardinality vectors
    /// of models of a formula.
    Mm {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        #[arg(long, value_enum, default_value_t = MmAlgo::Brute)]
        algo: MmAlgo,
        /// Per-sort bound for brute search when the theory has no size hint.
        #[arg(long, value_parser = bound_parser(), default_value_t = 8)]
        bound: u64,
        /// Caps every per-sort bound of brute search.
        #[arg(long, value_parser = bound_parser())]
        cap: Option<u64>,
    },
    /// Decide satisfiability, by bounded search, by a strong witness, or
    /// from a minimal model function of a stably finite theory.
    Decide {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        #[arg(long, value_enum, default_value_t = DecideVia::Search)]
        via: DecideVia,
        /// Per-sort bound when the theory has no size hint.
        #[arg(long, value_parser = bound_parser(), default_value_t = 8)]
        bound: u64,
    },
    /// Membership of n in S, read off the least model of
    /// cycle_n(x) ∧ f⁴(y) = y: n ∈ S iff it has n + 4 elements.
    DecideS {
        #[command(flatten)]
        theory: TheoryArgs,
        /// A prime >= 7.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = MmAlgo::FromDecision)]
        algo: MmAlgo,
        /// Caps every per-sort bound of brute search.
        #[arg(long, value_parser = bound_parser())]
        cap: Option<u64>,
    },
    /// Apply the theory's witness function to a formula.
    Witness {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        #[arg(long, value_enum, default_value_t = WitnessChoice::Theory)]
        witness: WitnessChoice,
    },
    /// Strong-witness completion for T1..T4: flatten the formula, apply the
    /// cycle witness, and shrink a seed model of wit(φ) ∧ δ to one whose
    /// domain is exactly the classes of the arrangement δ.
    Complete {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        /// Arrangement as `x=y; z`; variables of wit(φ) left out become
        /// singleton classes.
        #[arg(long)]
        arrangement: String,
    },
    /// Check the strong-witness conditions of a witness on a seeded corpus.
    VerifyWitness {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, value_enum, default_value_t = WitnessChoice::Theory)]
        witness: WitnessChoice,
        /// Number of corpus formulas.
        #[arg(long, default_value_t = 50)]
        corpus: usize,
        #[arg(long, value_parser = bound_parser(), default_value_t = 5)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip formulas whose witness has more variables than this.
        #[arg(long, default_value_t = 6)]
        max_vars: usize,
        /// Also compare φ ∧ δ and wit(φ) ∧ δ size by size.
        #[arg(long)]
        equivalence: bool,
    },
    /// Run one property check: convexity (valid implications into
    /// disjunctions of equalities), si (stable infiniteness by ray
    /// extension), fsmooth (finite smoothness by one-element growth) or star
    /// (separation of distinct path functions in star interpretations).
    Check {
        #[arg(value_enum)]
        property: CheckKind,
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        input: FormulaArgs,
        /// Per-sort size bound of model searches.
        #[arg(long, value_parser = bound_parser(), default_value_t = 8)]
        model_bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generated convexity premises, or generated formulas for `si`.
        #[arg(long)]
        formulas: Option<usize>,
        /// Longest ray added by `si`.
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        /// Size `fsmooth` grows to (default: start size + 4).
        #[arg(long)]
        max_size: Option<usize>,
        /// Path functions for `star`, as bit strings.
        #[arg(long, value_delimiter = ',', default_value = "000000,010000,100000,110000")]
        paths: Vec<String>,
        /// Star levels for `star`.
        #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
        levels: Vec<usize>,
    },
    /// Regenerate the property grid of the cycle theories (table1) or the
    /// placement of catalog theories among strongly polite, decidable and
    /// shiny (venn).
    Reproduce {
        #[arg(value_enum)]
        artifact: Artifact,
        #[arg(long, conflicts_with = "markdown")]
        json: bool,
        /// Markdown output (the default).
        #[arg(long)]
        markdown: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a seeded corpus of quantifier-free formulas over the
    /// theory's signature.
    Corpus {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Variables per sort.
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Maximum literals per formula.
        #[arg(long, default_value_t = 4)]
        literals: usize,
        /// Maximum term nesting.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Write one `.fml` file per formula into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
