//! Command-line front end. Every subcommand is a thin wrapper over the
//! library; [`run`] returns the process exit code.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::channel::{sample_channel, ChannelRealization};
use crate::cs::enumerate_cs_nash;
use crate::experiments::{
    db_to_linear, run_ne_count_sweep, run_sum_utility_sweep, trial_seed, write_ne_count_csv,
    write_sum_utility_csv, SweepConfig, DEFAULT_ORACLE_FRACTION, DEFAULT_TRIALS, FULL_TRIALS,
};
use crate::oracle::{cross_validate, OracleConfig};
use crate::pa::enumerate_pa_nash;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "icnash",
    version,
    about = "Pure Nash equilibria of the two-user parallel interference channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the equilibria of one instance and print them as JSON.
    Solve(SolveArgs),
    /// Probability of each equilibrium count versus SNR.
    SweepNeCount(SweepArgs),
    /// Average best and worst equilibrium sum utility versus SNR.
    SweepSumUtility(SweepArgs),
    /// Check the closed-form solvers against brute-force search.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameChoice {
    Pa,
    Cs,
    Both,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file: {"g": [[[g111, g112], [g121, g122]], [[g211, g212], [g221, g222]]]}.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub game: GameChoice,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// SNR axis in dB as START:STEP:STOP (or a single value).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_snr_range, default_value = "-10:5:30")]
    pub snr_db: SnrRange,
    /// Trials per SNR point.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), conflicts_with = "full")]
    pub trials: Option<u64>,
    /// Run 10^6 trials per SNR point.
    #[arg(long)]
    pub full: bool,
    #[arg(long, env = "ICNASH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Cap on worker threads. Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Fraction of trials cross-checked against brute force.
    #[arg(long, value_parser = parse_fraction, default_value_t = DEFAULT_ORACLE_FRACTION)]
    pub oracle_fraction: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Check a single instance file instead of random draws.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_snr_range, default_value = "-10:5:30")]
    pub snr_db: SnrRange,
    /// Random instances per SNR point.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 100)]
    pub trials: u64,
    #[arg(long, env = "ICNASH_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrRange(pub Vec<f64>);

/// Parses `START:STEP:STOP` (stop included when it lands on the grid) or a
/// single value.
pub fn parse_snr_range(s: &str) -> Result<SnrRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{p}' is not a number"))
    };
    match parts.as_slice() {
        [v] => Ok(SnrRange(vec![num(v)?])),
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 {
                return Err("step must be positive".into());
            }
            if stop < start {
                return Err("stop must not be below start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok(SnrRange((0..=n).map(|i| start + step * i as f64).collect()))
        }
        _ => Err(format!("expected START:STEP:STOP, got '{s}'")),
    }
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("fraction must be in [0, 1], got {v}"))
    }
}

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::SweepNeCount(a) => sweep(&a, SweepKind::NeCount),
        Command::SweepSumUtility(a) => sweep(&a, SweepKind::SumUtility),
        Command::OracleCheck(a) => oracle_check(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("icnash: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateInstance { .. } => EXIT_DEGENERATE,
        Error::Io(_) => EXIT_IO,
        Error::OracleMismatch { .. } => EXIT_ORACLE,
        Error::InvalidGain { .. }
        | Error::InvalidAction(_)
        | Error::InvalidConfig(_)
        | Error::Json(_) => EXIT_USAGE,
    }
}

pub fn load_instance(path: &Path) -> crate::Result<ChannelRealization> {
    let text = std::fs::read_to_string(path)?;
    ChannelRealization::from_json(&text)
}

/// JSON document printed by `solve`.
pub fn solve_json(ch: &ChannelRealization, game: GameChoice) -> serde_json::Value {
    match game {
        GameChoice::Pa => enumerate_pa_nash(ch).to_json(),
        GameChoice::Cs => enumerate_cs_nash(ch).to_json(),
        GameChoice::Both => json!({
            "pa": enumerate_pa_nash(ch).to_json(),
            "cs": enumerate_cs_nash(ch).to_json(),
        }),
    }
}

fn solve(args: &SolveArgs) -> crate::Result<()> {
    let ch = load_instance(&args.input)?;
    println!("{}", solve_json(&ch, args.game));
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum SweepKind {
    NeCount,
    SumUtility,
}

/// Sweep configuration described by the command-line flags.
pub fn sweep_config(args: &SweepArgs) -> crate::Result<SweepConfig> {
    let trials = match (args.full, args.trials) {
        (true, _) => FULL_TRIALS,
        (false, Some(t)) => t,
        (false, None) => DEFAULT_TRIALS,
    };
    SweepConfig::new(args.snr_db.0.clone(), trials, args.seed)?
        .with_oracle_fraction(args.oracle_fraction)?
        .with_threads(args.threads.map(|t| t as usize))
}

fn sweep(args: &SweepArgs, kind: SweepKind) -> crate::Result<()> {
    let cfg = sweep_config(args)?;
    // open the output first so an unwritable path fails before the work
    let mut out = BufWriter::new(File::create(&args.out)?);
    match kind {
        SweepKind::NeCount => write_ne_count_csv(&run_ne_count_sweep(&cfg)?, &mut out)?,
        SweepKind::SumUtility => write_sum_utility_csv(&run_sum_utility_sweep(&cfg)?, &mut out)?,
    }
    out.flush()?;
    println!("{}", args.out.display());
    Ok(())
}

fn oracle_check(args: &OracleArgs) -> crate::Result<()> {
    let cfg = OracleConfig::default();
    if let Some(path) = &args.input {
        let ch = load_instance(path)?;
        return match cross_validate(&ch, &cfg) {
            Ok(()) => {
                println!("{}", json!({"checked": 1, "mismatches": 0}));
                Ok(())
            }
            Err(detail) => Err(Error::OracleMismatch {
                snr_index: 0,
                trial: 0,
                detail,
            }),
        };
    }
    let mut checked = 0u64;
    for (i, &db) in args.snr_db.0.iter().enumerate() {
        let snr = db_to_linear(db);
        for t in 0..args.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(args.seed, i, t));
            let ch = sample_channel(&mut rng, snr);
            cross_validate(&ch, &cfg).map_err(|detail| Error::OracleMismatch {
                snr_index: i,
                trial: t,
                detail,
            })?;
            checked += 1;
        }
    }
    println!("{}", json!({"checked": checked, "mismatches": 0}));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_ranges() {
        assert_eq!(parse_snr_range("-10:5:30").unwrap().0.len(), 9);
        assert_eq!(
            parse_snr_range("0:5:20").unwrap().0,
            vec![0.0, 5.0, 10.0, 15.0, 20.0]
        );
        // stop off the grid is dropped
        assert_eq!(parse_snr_range("0:5:12").unwrap().0, vec![0.0, 5.0, 10.0]);
        assert_eq!(parse_snr_range("0:0.1:0.3").unwrap().0.len(), 4);
        assert_eq!(parse_snr_range("7").unwrap().0, vec![7.0]);
        assert!(parse_snr_range("0:0:10").is_err());
        assert!(parse_snr_range("10:5:0").is_err());
        assert!(parse_snr_range("a:1:2").is_err());
        assert!(parse_snr_range("1:2").is_err());
    }

    #[test]
    fn flag_validation() {
        let base = ["icnash", "sweep-ne-count", "--out", "x.csv"];
        let parse = |extra: &[&str]| Cli::try_parse_from(base.iter().chain(extra.iter()).copied());
        assert!(parse(&[]).is_ok());
        assert!(parse(&["--trials", "0"]).is_err());
        assert!(parse(&["--trials", "10", "--full"]).is_err());
        assert!(parse(&["--oracle-fraction", "2"]).is_err());
        assert!(parse(&["--threads", "0"]).is_err());
        assert!(parse(&["--bogus"]).is_err());
        assert!(parse(&["--snr-db", "-10:5:30"]).is_ok());
    }

    #[test]
    fn flags_map_to_config() {
        let cli = Cli::try_parse_from([
            "icnash",
            "sweep-sum-utility",
            "--out",
            "x.csv",
            "--snr-db",
            "0:10:20",
            "--trials",
            "12",
            "--seed",
            "9",
            "--threads",
            "2",
            "--oracle-fraction",
            "0",
        ])
        .unwrap();
        let Command::SweepSumUtility(args) = cli.command else {
            panic!("wrong subcommand")
        };
        let cfg = sweep_config(&args).unwrap();
        assert_eq!(cfg.snr_db_values, vec![0.0, 10.0, 20.0]);
        assert_eq!(cfg.trials, 12);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.threads, Some(2));
        assert_eq!(cfg.oracle_check_fraction, 0.0);

        let cli =
            Cli::try_parse_from(["icnash", "sweep-ne-count", "--out", "x.csv", "--full"]).unwrap();
        let Command::SweepNeCount(args) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(sweep_config(&args).unwrap().trials, FULL_TRIALS);
    }
}
