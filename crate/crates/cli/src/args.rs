use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "expprod", version, about = "Exponential product formulas: correction terms, schemes, order conditions, propagation and world-line QMC")]
pub struct Cli {
    /// Output directory. Without it the primary output goes to stdout and no
    /// manifest is written.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Seed for every random choice (Monte Carlo chains, random test systems).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output representation; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// JSON object of parameters; keys are long option names. Options given
    /// on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lie-projected correction terms of a product of exponentials.
    Bch(BchArgs),
    /// Scheme catalog queries.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Solve order conditions of a stage pattern, or one univariate polynomial.
    Solve(SolveArgs),
    /// Third-order ABABAB solutions as a function of p6.
    Family(FamilyArgs),
    /// Global error against step count, with the fitted order.
    Converge(ConvergeArgs),
    /// Energy of the precessing spin under a splitting scheme or a Taylor step.
    Precession(PrecessionArgs),
    /// Energy drift on the Umeno Hamiltonian.
    Umeno(UmenoArgs),
    /// Time-ordered propagation of the driven two-level system.
    Timedep(TimedepArgs),
    /// World-line Monte Carlo run.
    Qmc(QmcArgs),
    /// Simulated quantum annealing.
    Anneal(AnnealArgs),
    /// Monte Carlo at several Trotter numbers, extrapolated to n = ∞.
    Extrapolate(ExtrapolateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bch(_) => "bch",
            Command::Scheme(SchemeCommand::List) => "scheme-list",
            Command::Scheme(SchemeCommand::Show(_)) => "scheme-show",
            Command::Scheme(SchemeCommand::Flatten(_)) => "scheme-flatten",
            Command::Scheme(SchemeCommand::Check(_)) => "scheme-check",
            Command::Solve(_) => "solve",
            Command::Family(_) => "family",
            Command::Converge(_) => "converge",
            Command::Precession(_) => "precession",
            Command::Umeno(_) => "umeno",
            Command::Timedep(_) => "timedep",
            Command::Qmc(_) => "qmc",
            Command::Anneal(_) => "anneal",
            Command::Extrapolate(_) => "extrapolate",
        }
    }
}

#[derive(Args, Debug)]
pub struct BchArgs {
    /// Stage list, e.g. `A:x/2,B:x,A:x/2` or `A:x,[A,B]:x^2/12`.
    #[arg(long)]
    pub stages: String,
    /// Highest degree of the expansion.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

#[derive(Subcommand, Debug)]
pub enum SchemeCommand {
    /// Named constructions with their orders.
    List,
    /// Stage list and metadata of a scheme.
    Show(SchemeRef),
    /// Stage list before and after merging adjacent same-slot factors.
    Flatten(SchemeRef),
    /// Verified order, slot sums, symmetry and sign of the coefficients.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct SchemeRef {
    /// Catalog name, scheme JSON file, or a stage list such as `A:1/2,B:1,A:1/2`.
    #[arg(long)]
    pub scheme: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub scheme: SchemeRef,
    /// Highest order to test (default: claimed order + 1).
    #[arg(long)]
    pub max_order: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Alternating slot pattern such as `ABABAB`.
    #[arg(long, conflicts_with = "poly")]
    pub pattern: Option<String>,
    /// Target order of the pattern's conditions.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Coefficients of a univariate polynomial in `s`, low degree first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<String>>,
    /// Fixed parameters, `name=value`.
    #[arg(long, value_delimiter = ',')]
    pub fix: Vec<String>,
    /// Initial guesses, `name=value`; unlisted parameters start at
    /// 1/(occurrences of their slot).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub guess: Vec<String>,
    /// Largest denominator tried when recognising rational solutions.
    #[arg(long, default_value_t = 10_000)]
    pub max_denominator: i64,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Grid `start:end:step` or a comma list.
    #[arg(long, default_value = "0.2:1.4:0.05")]
    pub p6: String,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Scheme(s) to sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    pub scheme: Vec<String>,
    /// `spin[:Γ]`, `random3[:seed]` (default seed: --seed) or `driven[:ω]`.
    #[arg(long, default_value = "spin")]
    pub system: String,
    /// Step counts; defaults to 2^5..2^10.
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub steps: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct PrecessionArgs {
    /// Scheme, or `perturbative` for the first-order Taylor step.
    #[arg(long, default_value = "trotter")]
    pub scheme: String,
    #[arg(long, default_value_t = 0.75)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Run length in precession periods.
    #[arg(long, default_value_t = 10.0)]
    pub periods: f64,
    #[arg(long, default_value_t = 1, value_parser = parse_count)]
    pub sample_every: usize,
}

#[derive(Args, Debug)]
pub struct UmenoArgs {
    /// Scheme, or `euler`.
    #[arg(long, default_value = "trotter")]
    pub scheme: String,
    /// `kinetic-first` (A drifts) or `potential-first` (A kicks).
    #[arg(long, default_value = "kinetic-first")]
    pub slot_map: String,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    pub steps: usize,
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    pub sample_every: usize,
}

#[derive(Args, Debug)]
pub struct TimedepArgs {
    /// Scheme with a `T` slot.
    #[arg(long, default_value = "g4")]
    pub scheme: String,
    /// Drive amplitude ω in `σ_z + ω cos(t) σ_x`.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value = "100", value_parser = parse_count)]
    pub steps: usize,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Model JSON file (`sites`, `bonds`, `gamma`, `beta`).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Number of sites of an inline model.
    #[arg(long, conflicts_with = "model")]
    pub sites: Option<usize>,
    /// Bonds of an inline model as JSON, e.g. `[[0,1,1.0],[1,2,1.0]]`.
    #[arg(long, requires = "sites", conflicts_with = "chain")]
    pub bonds: Option<String>,
    /// Open chain of this many sites with uniform coupling --coupling.
    #[arg(long, conflicts_with_all = ["model", "sites"])]
    pub chain: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub coupling: f64,
    /// Transverse field (overrides the model file).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Inverse temperature (overrides the model file).
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Args, Debug)]
pub struct QmcArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Trotter number.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Total sweeps, thermalisation included.
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    pub sweeps: usize,
    #[arg(long, default_value = "1e4", value_parser = parse_count)]
    pub therm: usize,
    /// Also compute the exact reference: `n` (enumeration at the run's n) or `inf`.
    #[arg(long)]
    pub exact: Option<String>,
}

#[derive(Args, Debug)]
pub struct AnnealArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Explicit decreasing field values.
    #[arg(long, value_delimiter = ',', conflicts_with = "geometric")]
    pub schedule: Vec<f64>,
    /// Geometric schedule `start:end:stages`.
    #[arg(long, default_value = "3:0.01:30")]
    pub geometric: String,
    #[arg(long, default_value = "20", value_parser = parse_count)]
    pub sweeps_per_stage: usize,
    /// Independent runs with seeds --seed, --seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
}

#[derive(Args, Debug)]
pub struct ExtrapolateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Trotter numbers (at least three).
    #[arg(long, value_delimiter = ',', default_value = "4,8,16", value_parser = parse_count)]
    pub n_list: Vec<usize>,
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    pub sweeps: usize,
    #[arg(long, default_value = "1e4", value_parser = parse_count)]
    pub therm: usize,
}

/// Non-negative integer, also accepting integral floats such as `1e5`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let s = s.trim();
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as usize),
        _ => Err(format!("expected a non-negative integer, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e5"), Ok(100_000));
        assert_eq!(parse_count("100000.0"), Ok(100_000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }
}
