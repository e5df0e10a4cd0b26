//! `fatpoints`: generate configurations, compute Hilbert functions of fat
//! points, run the verification suites, and inspect incidences.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 the primes disagreed (field artifact).

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fatpoints::format::ConfigFile;
use fatpoints::plane::{build_c_d, build_c_dr, max_on_curve, sample_random_points};
use fatpoints::verify::{self, seed_list, SuiteParams, VerificationReport, VerifyContext};
use fatpoints::{hilbert_function, hilbert_function_exact, Error, FieldSpec, PrimeField};

use render::Format;

#[derive(Parser, Debug)]
#[command(
    name = "fatpoints",
    version,
    about = "Hilbert functions of fat points in the projective plane"
)]
struct Cli {
    /// Comma-separated working primes for modular rank computations.
    #[arg(long, global = true, env = "FATPOINTS_PRIMES", value_delimiter = ',')]
    primes: Option<Vec<u64>>,

    /// Base seed; trial i of a suite uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Number of random trials for suites that sample.
    #[arg(long, global = true)]
    trials: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a configuration file.
    Gen(GenArgs),
    /// Hilbert function of the fat points in a configuration file.
    Hf(HfArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Largest number of points on a line or conic.
    Diag(DiagArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    /// The pairwise meets of d general lines.
    Cd,
    /// C_d plus r meets with a further line.
    Cdr,
    /// s random points.
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// `q` for the rationals, or an odd prime.
    #[arg(long, default_value = "q")]
    field: String,
    /// Multiplicity written for every point.
    #[arg(long, default_value_t = 1)]
    multiplicity: u32,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct HfArgs {
    input: PathBuf,
    /// Use this multiplicity for every point instead of the file's.
    #[arg(long)]
    multiplicity: Option<u32>,
    /// Exact rational elimination instead of modular ranks.
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Statement {
    Thm1,
    FirstHalf,
    S11,
    Eq1,
    Ah,
    CdrGeneric,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    statement: Statement,
    /// Number of lines (thm1, first-half, cdr-generic).
    #[arg(long)]
    d: Option<usize>,
    /// Largest degree for eq1.
    #[arg(long, default_value_t = 12)]
    dmax: usize,
    /// Number of consecutive seeds for constructions (thm1, cdr-generic).
    #[arg(long)]
    seeds: Option<usize>,
    /// Number of points for ah.
    #[arg(long, default_value_t = 11)]
    s: usize,
    /// Comma-separated r values for cdr-generic (default 0..=d).
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<usize>>,
    /// Add the structured 11-point families to s11.
    #[arg(long)]
    adversarial: bool,
    /// Draws per structured family.
    #[arg(long, default_value_t = verify::DEFAULT_FAMILY_DRAWS)]
    family_draws: usize,
    /// Include wall-clock runtimes in the output.
    #[arg(long)]
    timings: bool,
    /// Directory for counterexample configuration files.
    #[arg(long)]
    failures_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiagArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    max_degree: u8,
}

/// Settings shared by every subcommand.
struct Globals {
    primes: Vec<PrimeField>,
    seed: u64,
    format: Format,
    trials: Option<usize>,
}

enum Failure {
    Verification,
    Usage(String),
    Artifact(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FieldArtifact(_) => Failure::Artifact(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let globals = match parse_primes(cli.primes.as_deref()) {
        Ok(primes) => Globals {
            primes,
            seed: cli.seed,
            format: cli.format,
            trials: cli.trials,
        },
        Err(e) => return finish(Err(e.into()), cli.format),
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(&args, &globals),
        Command::Hf(args) => cmd_hf(&args, &globals),
        Command::Verify(args) => cmd_verify(&args, &globals),
        Command::Diag(args) => cmd_diag(&args, &globals),
    };
    finish(result, globals.format)
}

fn exit_code(result: &Result<(), Failure>) -> u8 {
    match result {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Usage(_)) => 2,
        Err(Failure::Artifact(_)) => 3,
    }
}

fn finish(result: Result<(), Failure>, format: Format) -> ExitCode {
    let code = exit_code(&result);
    match result {
        Ok(()) | Err(Failure::Verification) => {}
        Err(Failure::Usage(msg)) => eprintln!("error: {msg}"),
        Err(Failure::Artifact(e)) => {
            if let Error::FieldArtifact(per_prime) = &e {
                print!("{}", render::artifact(per_prime, format));
            }
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(code)
}

fn parse_primes(given: Option<&[u64]>) -> Result<Vec<PrimeField>, Error> {
    match given {
        None => Ok(PrimeField::defaults()),
        Some([]) => Err(Error::InvalidInput("--primes is empty".into())),
        Some(list) => list.iter().map(|&p| PrimeField::working(p)).collect(),
    }
}

fn parse_field(text: &str) -> Result<FieldSpec, Error> {
    match text {
        "q" | "Q" | "rational" => Ok(FieldSpec::Rational),
        other => {
            let p: u64 = other.parse().map_err(|_| {
                Error::InvalidInput(format!("field must be `q` or a prime, got {other}"))
            })?;
            Ok(FieldSpec::Prime(PrimeField::new(p)?))
        }
    }
}

fn need(value: Option<usize>, flag: &str, kind: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("gen {kind} needs --{flag}")))
}

fn cmd_gen(args: &GenArgs, g: &Globals) -> Result<(), Failure> {
    let field = parse_field(&args.field)?;
    let x = match args.kind {
        GenKind::Cd => build_c_d(need(args.d, "d", "cd")?, field, g.seed)?,
        GenKind::Cdr => build_c_dr(
            need(args.d, "d", "cdr")?,
            need(args.r, "r", "cdr")?,
            field,
            g.seed,
        )?,
        GenKind::Random => sample_random_points(need(args.s, "s", "random")?, field, g.seed)?,
    };
    let file = ConfigFile::from_configuration(&x, vec![args.multiplicity; x.len()])?;
    file.write(&args.out)?;
    print!("{}", render::generated(&file, &args.out, g.format));
    Ok(())
}

fn load(path: &Path) -> Result<ConfigFile, Failure> {
    ConfigFile::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_hf(args: &HfArgs, g: &Globals) -> Result<(), Failure> {
    let mut file = load(&args.input)?;
    if let Some(m) = args.multiplicity {
        file.multiplicities = vec![m; file.points.len()];
    }
    let z = file.to_scheme()?;
    let h = if args.exact {
        hilbert_function_exact(&z)?
    } else {
        hilbert_function(&z, &g.primes)?
    };
    let seed = file.seed.unwrap_or(g.seed);
    print!(
        "{}",
        render::hilbert(&h, &args.input, &file, seed, g.format)
    );
    Ok(())
}

fn cmd_diag(args: &DiagArgs, g: &Globals) -> Result<(), Failure> {
    let file = load(&args.input)?;
    let x = file.to_configuration()?;
    let incidences = (1..=usize::from(args.max_degree))
        .map(|e| max_on_curve(&x, e))
        .collect::<Result<Vec<_>, _>>()?;
    let seed = file.seed.unwrap_or(g.seed);
    print!(
        "{}",
        render::diag(&incidences, &args.input, &file, seed, g.format)
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, g: &Globals) -> Result<(), Failure> {
    let ctx = VerifyContext::with_primes(g.primes.clone());
    let defaults = SuiteParams::default();
    let seed = g.seed;
    let d = args.d.unwrap_or(5);
    let mut reports: Vec<VerificationReport> = match args.statement {
        Statement::Thm1 => {
            let seeds = seed_list(seed, args.seeds.unwrap_or(defaults.thm1_seeds));
            vec![verify::verify_theorem_1_1(d, &seeds, &ctx)]
        }
        Statement::FirstHalf => {
            check_d(d, 3)?;
            let trials = g.trials.unwrap_or(defaults.first_half_trials);
            vec![verify::verify_first_half(d, trials, seed, &ctx)]
        }
        Statement::S11 => {
            let trials = g.trials.unwrap_or(defaults.s11_trials);
            let families = args.adversarial.then_some(args.family_draws);
            vec![verify::verify_s11_minimality_with(
                trials, seed, families, &ctx,
            )]
        }
        Statement::Eq1 => {
            if args.dmax < 2 {
                return Err(Failure::Usage("--dmax must be at least 2".into()));
            }
            vec![verify::verify_eq1_identity(args.dmax)]
        }
        Statement::Ah => {
            let trials = g.trials.unwrap_or(defaults.ah_trials);
            vec![verify::verify_ah_achieved(args.s, trials, seed, &ctx)]
        }
        Statement::CdrGeneric => {
            let r_values = args.r.clone().unwrap_or_else(|| (0..=d).collect());
            if let Some(&r) = r_values.iter().find(|&&r| r > d) {
                return Err(Failure::Usage(format!("r = {r} exceeds d = {d}")));
            }
            let seeds = seed_list(seed, args.seeds.unwrap_or(defaults.cdr_seeds));
            vec![verify::verify_cdr_generic(d, &r_values, &seeds, &ctx)]
        }
        Statement::All => {
            let mut p = SuiteParams {
                seed,
                ..SuiteParams::default()
            };
            if let Some(t) = g.trials {
                p.first_half_trials = t;
                p.s11_trials = t;
                p.ah_trials = t;
            }
            verify::run_all(&p, &ctx)
        }
    };
    if args.timings {
        reports = reports
            .into_iter()
            .map(VerificationReport::with_timing)
            .collect();
    }
    print!("{}", render::reports(&reports, seed, &g.primes, g.format));
    if let Some(dir) = &args.failures_dir {
        write_counterexamples(&reports, dir)?;
    }
    if reports.iter().all(VerificationReport::passed) {
        Ok(())
    } else if reports.iter().any(VerificationReport::has_field_artifact) {
        Err(Failure::Artifact(first_artifact(&reports)))
    } else {
        Err(Failure::Verification)
    }
}

fn check_d(d: usize, min: usize) -> Result<(), Failure> {
    if d < min {
        return Err(Failure::Usage(format!("--d must be at least {min}")));
    }
    Ok(())
}

/// The per-prime values of the first recorded artifact.
fn first_artifact(reports: &[VerificationReport]) -> Error {
    let per_prime = reports
        .iter()
        .flat_map(|r| &r.failures)
        .find_map(|f| f.observed.get("field_artifact").cloned())
        .and_then(|v| {
            v.as_array().map(|rows| {
                rows.iter()
                    .filter_map(|row| {
                        Some(fatpoints::error::PrimeValues {
                            prime: row.get("prime")?.as_u64()?,
                            values: serde_json::from_value(row.get("values")?.clone()).ok()?,
                        })
                    })
                    .collect()
            })
        })
        .unwrap_or_default();
    Error::FieldArtifact(per_prime)
}

fn write_counterexamples(reports: &[VerificationReport], dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    for report in reports {
        for f in &report.failures {
            if let Some(config) = &f.configuration {
                let path = dir.join(format!("{}-trial{}.json", report.statement_id, f.trial));
                config.write(&path)?;
                eprintln!("counterexample written to {}", path.display());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Ok(())), 0);
        assert_eq!(exit_code(&Err(Failure::Verification)), 1);
        assert_eq!(exit_code(&Err(Error::NotPrime(9).into())), 2);
        assert_eq!(exit_code(&Err(Error::FieldArtifact(Vec::new()).into())), 3);
    }

    #[test]
    fn artifact_is_recovered_from_reports() {
        let mut report = verify::verify_eq1_identity(3);
        report.failures.push(verify::Failure {
            trial: 0,
            seed: Some(1),
            label: "random".into(),
            configuration: None,
            observed: serde_json::json!({
                "field_artifact": [
                    { "prime": 2147483647u64, "values": [1, 1, 1] },
                    { "prime": 2147483629u64, "values": [1, 2] }
                ]
            }),
            expected: serde_json::Value::Null,
        });
        assert!(report.has_field_artifact());
        match first_artifact(&[report]) {
            Error::FieldArtifact(per_prime) => {
                assert_eq!(per_prime.len(), 2);
                assert_eq!(per_prime[1].values, vec![1, 2]);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
