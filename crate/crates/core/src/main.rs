use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadric_steenrod::harness::{
    render_json, render_markdown, sweep, verify_chern, verify_coefficient_sum,
    verify_degree_vanishing, verify_lemma_1_3, verify_lemma_2_2, verify_prop_2_1,
    verify_theorem_1_1, verify_theorem_2_4, verify_wu_consistency, CheckKind, HarnessError,
    HarnessOptions, Mutation, SweepConfig, VerificationReport,
};
use quadric_steenrod::quadric_chow::MiddleSquare;

#[derive(Parser, Debug)]
#[command(
    name = "quadric-steenrod",
    version,
    about = "Verify Steenrod-operation congruences on split quadrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run with a deliberately broken rule; some checks are expected to fail.
    #[arg(
        long,
        value_enum,
        global = true,
        num_args = 0..=1,
        default_missing_value = "flipped-binomial",
        require_equals = true
    )]
    mutation_test: Option<MutationArg>,

    /// Use the other convention for the square of the middle linear subspace.
    #[arg(long, global = true)]
    opposite_middle_square: bool,

    /// Seed for the names of the opaque lift-error classes.
    #[arg(long, global = true, default_value_t = 0)]
    gamma_seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MutationArg {
    FlippedBinomial,
    SwappedKunnethBlock,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mod-4 congruence for the generic cycle, m < n/2 + j.
    Thm1(Family),
    /// Exact vanishing of the l x z block contribution.
    Lemma13(Family),
    /// S^{d+j} vanishes on pr_* in^* x by degree.
    Degree(Family),
    /// Wu-formula consistency; --n is the quadric dimension.
    Wu(WuArgs),
    /// Full congruence at m = [(n+1)/2] + j.
    Prop21(Family),
    /// Middle-power pushforward of the square of the integral cycle.
    Lemma22(Family),
    /// pr_*(x h^{[n/2]}) = z^j mod 2.
    Thm24(Family),
    /// Binomial window sum equals 2^k.
    Coeffsum(CoeffArgs),
    /// Parity of the Chern classes of -T_P; --n is the dimension of P.
    Chern(Family),
    /// Every check over ranges.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct Family {
    #[arg(long, alias = "d", conflicts_with = "n_range")]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, conflicts_with = "j_range")]
    j: Option<u32>,
    /// Inclusive range A..B.
    #[arg(long, value_parser = parse_range)]
    n_range: Option<RangeInclusive<u32>>,
    /// Inclusive range A..B.
    #[arg(long, value_parser = parse_range)]
    j_range: Option<RangeInclusive<u32>>,
    /// Largest m enumerated when --m is absent.
    #[arg(long, default_value_t = 20)]
    m_max: u32,
}

#[derive(Args, Debug, Clone)]
struct WuArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long, conflicts_with = "r_range")]
    r: Option<u32>,
    #[arg(long, value_parser = parse_range)]
    r_range: Option<RangeInclusive<u32>>,
}

#[derive(Args, Debug, Clone)]
struct CoeffArgs {
    /// Dimension d = 2^t - 1; chosen minimal when absent.
    #[arg(long, alias = "d")]
    n: Option<u32>,
    /// Defaults to 2k + j.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 0)]
    j: u32,
    #[arg(long, conflicts_with = "k_range")]
    k: Option<u32>,
    #[arg(long, value_parser = parse_range)]
    k_range: Option<RangeInclusive<u32>>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long, value_parser = parse_range, default_value = "1..24")]
    n_range: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range, default_value = "0..8")]
    j_range: RangeInclusive<u32>,
    #[arg(long, default_value_t = 20)]
    m_max: u32,
    /// Comma-separated subset of checks.
    #[arg(long, value_delimiter = ',', value_parser = parse_check)]
    checks: Vec<CheckKind>,
    #[arg(long)]
    serial: bool,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok(a..=b)
}

fn parse_check(s: &str) -> Result<CheckKind, String> {
    CheckKind::from_name(s).ok_or_else(|| {
        let names: Vec<_> = CheckKind::ALL.iter().map(|c| c.name()).collect();
        format!("unknown check {s:?}; expected one of {}", names.join(", "))
    })
}

fn pick(
    single: Option<u32>,
    range: &Option<RangeInclusive<u32>>,
    default: RangeInclusive<u32>,
) -> RangeInclusive<u32> {
    match (single, range) {
        (Some(v), _) => v..=v,
        (None, Some(r)) => r.clone(),
        (None, None) => default,
    }
}

type Outcome = Result<Vec<VerificationReport>, HarnessError>;

fn run_small_m(
    f: &Family,
    opts: &HarnessOptions,
    check: fn(u32, u32, u32, &HarnessOptions) -> Result<VerificationReport, HarnessError>,
) -> Outcome {
    if let (Some(n), Some(m), Some(j)) = (f.n, f.m, f.j) {
        return Ok(vec![check(n, m, j, opts)?]);
    }
    let mut out = Vec::new();
    for n in pick(f.n, &f.n_range, 1..=24) {
        for m in pick(f.m, &None, 0..=f.m_max) {
            for j in pick(f.j, &f.j_range, 0..=m) {
                if j <= m && 2 * m < n + 2 * j {
                    out.push(check(n, m, j, opts)?);
                }
            }
        }
    }
    Ok(out)
}

fn run_middle(
    f: &Family,
    opts: &HarnessOptions,
    check: fn(u32, u32, &HarnessOptions) -> Result<VerificationReport, HarnessError>,
) -> Outcome {
    let mut out = Vec::new();
    for n in pick(f.n, &f.n_range, 1..=24) {
        for j in pick(f.j, &f.j_range, 0..=8) {
            if let Some(m) = f.m {
                let expected = n.div_ceil(2) + j;
                if m != expected {
                    return Err(HarnessError::Precondition(format!(
                        "m = [(n+1)/2] + j = {expected} (got m={m})"
                    )));
                }
            }
            out.push(check(n, j, opts)?);
        }
    }
    Ok(out)
}

fn run(cli: &Cli) -> Outcome {
    let mut opts = HarnessOptions::default().with_gamma_seed(cli.gamma_seed);
    if cli.opposite_middle_square {
        opts = opts.with_middle_square(MiddleSquare::Opposite);
    }
    opts = opts.with_mutation(cli.mutation_test.map(|m| match m {
        MutationArg::FlippedBinomial => Mutation::FlippedBinomial,
        MutationArg::SwappedKunnethBlock => Mutation::SwappedKunnethBlock,
    }));

    match &cli.command {
        Command::Thm1(f) => run_small_m(f, &opts, verify_theorem_1_1),
        Command::Lemma13(f) => run_small_m(f, &opts, verify_lemma_1_3),
        Command::Degree(f) => run_small_m(f, &opts, verify_degree_vanishing),
        Command::Prop21(f) => run_middle(f, &opts, verify_prop_2_1),
        Command::Lemma22(f) => run_middle(f, &opts, verify_lemma_2_2),
        Command::Thm24(f) => run_middle(f, &opts, verify_theorem_2_4),
        Command::Wu(w) => {
            let mut out = Vec::new();
            for d in pick(w.family.n, &w.family.n_range, 1..=7) {
                for r in pick(w.r, &w.r_range, 0..=10) {
                    out.push(verify_wu_consistency(d, r, &opts)?);
                }
            }
            Ok(out)
        }
        Command::Coeffsum(c) => {
            let mut out = Vec::new();
            for k in pick(c.k, &c.k_range, 0..=10) {
                let m = c.m.unwrap_or(2 * k + c.j);
                let d = c.n.unwrap_or((2 * k + 1).next_power_of_two() - 1);
                out.push(verify_coefficient_sum(k, d, m, c.j)?);
            }
            Ok(out)
        }
        Command::Chern(f) => {
            let dims: Vec<u32> = match (f.n, &f.n_range) {
                (None, None) => (1..=16).chain([31]).collect(),
                _ => pick(f.n, &f.n_range, 1..=1).collect(),
            };
            dims.into_iter().map(verify_chern).collect()
        }
        Command::Sweep(s) => {
            let config = SweepConfig {
                n_range: s.n_range.clone(),
                j_range: s.j_range.clone(),
                m_max: s.m_max,
                checks: if s.checks.is_empty() {
                    CheckKind::ALL.to_vec()
                } else {
                    s.checks.clone()
                },
                options: opts,
                parallel: !s.serial,
                ..SweepConfig::default()
            };
            Ok(sweep(&config)?.reports)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => render_json(&reports) + "\n",
        Format::Markdown => render_markdown(&reports),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
