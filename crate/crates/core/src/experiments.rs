//! Seeded Monte-Carlo sweeps over the SNR axis.
//!
//! Trial `t` at SNR index `i` draws its instance from a generator seeded by
//! `trial_seed(seed, i, t)`, so results do not depend on how trials are
//! scheduled across threads. Per-trial outcomes are collected in trial order
//! and reduced sequentially.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{sample_channel, sum_utility, ChannelRealization};
use crate::cs::{enumerate_cs_nash, Selection};
use crate::oracle::{cross_validate, OracleConfig};
use crate::pa::{enumerate_pa_nash, Fig1Type};
use crate::{Error, Result};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const FULL_TRIALS: u64 = 1_000_000;
pub const DEFAULT_ORACLE_FRACTION: f64 = 0.001;
/// Points sampled along an equilibrium segment when taking best and worst
/// sum utilities.
const CONTINUUM_SAMPLES: usize = 1001;

/// -10 dB to 30 dB in 5 dB steps.
pub fn default_snr_db() -> Vec<f64> {
    (0..=8).map(|i| -10.0 + 5.0 * i as f64).collect()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub snr_db_values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub oracle_check_fraction: f64,
    /// Worker threads; `None` uses the global rayon pool. Output does not
    /// depend on this.
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(snr_db_values: Vec<f64>, trials: u64, seed: u64) -> Result<Self> {
        let cfg = Self {
            snr_db_values,
            trials,
            seed,
            oracle_check_fraction: DEFAULT_ORACLE_FRACTION,
            threads: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_oracle_fraction(mut self, fraction: f64) -> Result<Self> {
        self.oracle_check_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Result<Self> {
        self.threads = threads;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.snr_db_values.is_empty() {
            return bad("the SNR list is empty".into());
        }
        if self.snr_db_values.iter().any(|v| !v.is_finite()) {
            return bad("SNR values must be finite".into());
        }
        if self.snr_db_values.windows(2).any(|w| w[1] <= w[0]) {
            return bad("SNR values must be strictly increasing".into());
        }
        if !(0.0..=1.0).contains(&self.oracle_check_fraction) {
            return bad(format!(
                "oracle fraction must be in [0, 1], got {}",
                self.oracle_check_fraction
            ));
        }
        if self.threads == Some(0) {
            return bad("thread count must be at least 1".into());
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the substream for trial `trial` at SNR index `snr_index`.
pub fn trial_seed(seed: u64, snr_index: usize, trial: u64) -> u64 {
    let h = splitmix64(seed);
    let h = splitmix64(h ^ snr_index as u64);
    splitmix64(h ^ trial)
}

pub fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, snr_index, trial))
}

/// Equilibrium structure and outcomes of both games on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSummary {
    pub pa_type: Fig1Type,
    pub pa_best: f64,
    pub pa_worst: f64,
    pub cs_count: usize,
    pub cs_equilibria: Vec<Selection>,
    pub cs_best: f64,
    pub cs_worst: f64,
}

pub fn evaluate_instance(ch: &ChannelRealization) -> InstanceSummary {
    let pa = enumerate_pa_nash(ch);
    let cs = enumerate_cs_nash(ch);
    let (pa_best, pa_worst) = extrema(
        pa.representatives(CONTINUUM_SAMPLES)
            .iter()
            .map(|p| sum_utility(ch, p)),
    );
    let (cs_best, cs_worst) = extrema(
        cs.equilibria
            .iter()
            .map(|s| sum_utility(ch, &s.to_profile())),
    );
    InstanceSummary {
        pa_type: pa.fig1_type,
        pa_best,
        pa_worst,
        cs_count: cs.count(),
        cs_equilibria: cs.equilibria,
        cs_best,
        cs_worst,
    }
}

fn extrema(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), v| {
        (hi.max(v), lo.min(v))
    })
}

fn run_trials(cfg: &SweepConfig, snr_index: usize) -> Result<Vec<InstanceSummary>> {
    let snr = db_to_linear(cfg.snr_db_values[snr_index]);
    let oracle = OracleConfig::default();
    let trial = |t: u64| -> Result<InstanceSummary> {
        let mut rng = trial_rng(cfg.seed, snr_index, t);
        let ch = sample_channel(&mut rng, snr);
        let check = rng.random::<f64>() < cfg.oracle_check_fraction;
        if check {
            cross_validate(&ch, &oracle).map_err(|detail| Error::OracleMismatch {
                snr_index,
                trial: t,
                detail,
            })?;
        }
        Ok(evaluate_instance(&ch))
    };
    let run = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<Vec<_>>>()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Probabilities of each equilibrium structure at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct NeCountRow {
    pub snr_db: f64,
    pub pa_type_a_prob: f64,
    pub pa_type_b_prob: f64,
    pub pa_type_d_prob: f64,
    /// Draws of the measure-zero types C and E.
    pub pa_other_count: u64,
    pub cs_one_prob: f64,
    pub cs_two_prob: f64,
    pub trials: u64,
    /// Two-equilibria CS draws whose pair was `{(1,1), (0,0)}` rather than
    /// `{(1,0), (0,1)}`.
    pub cs_coordination_pairs: u64,
    /// CS draws with zero or more than two equilibria (only possible on ties).
    pub cs_other_count: u64,
}

pub fn run_ne_count_sweep(cfg: &SweepConfig) -> Result<Vec<NeCountRow>> {
    cfg.validate()?;
    let coordination = [Selection::new(1, 1), Selection::new(0, 0)];
    (0..cfg.snr_db_values.len())
        .map(|i| {
            let outcomes = run_trials(cfg, i)?;
            let mut pa = [0u64; 5];
            let (mut cs_one, mut cs_two, mut cs_other, mut coord) = (0u64, 0u64, 0u64, 0u64);
            for o in &outcomes {
                pa[o.pa_type as usize] += 1;
                match o.cs_count {
                    1 => cs_one += 1,
                    2 => {
                        cs_two += 1;
                        if o.cs_equilibria.iter().all(|s| coordination.contains(s)) {
                            coord += 1;
                        }
                    }
                    _ => cs_other += 1,
                }
            }
            let n = cfg.trials as f64;
            let row = NeCountRow {
                snr_db: cfg.snr_db_values[i],
                pa_type_a_prob: pa[Fig1Type::A as usize] as f64 / n,
                pa_type_b_prob: pa[Fig1Type::B as usize] as f64 / n,
                pa_type_d_prob: pa[Fig1Type::D as usize] as f64 / n,
                pa_other_count: pa[Fig1Type::C as usize] + pa[Fig1Type::E as usize],
                cs_one_prob: cs_one as f64 / n,
                cs_two_prob: cs_two as f64 / n,
                trials: cfg.trials,
                cs_coordination_pairs: coord,
                cs_other_count: cs_other,
            };
            if row.cs_coordination_pairs > 0 {
                log::warn!(
                    "{} dB: {} CS draws with the pair {{(1,1), (0,0)}}",
                    row.snr_db,
                    row.cs_coordination_pairs
                );
            }
            log::info!(
                "{} dB: pa A/B/D = {:.4}/{:.4}/{:.4}, cs 1/2 = {:.4}/{:.4}",
                row.snr_db,
                row.pa_type_a_prob,
                row.pa_type_b_prob,
                row.pa_type_d_prob,
                row.cs_one_prob,
                row.cs_two_prob
            );
            Ok(row)
        })
        .collect()
}

/// Average best and worst equilibrium sum utility at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SumUtilityRow {
    pub snr_db: f64,
    pub pa_best_avg: f64,
    pub pa_worst_avg: f64,
    pub cs_best_avg: f64,
    pub cs_worst_avg: f64,
    pub trials: u64,
    /// Draws where the best CS equilibrium is below the best PA one.
    pub best_violations: u64,
    /// Draws where the worst CS equilibrium is below the worst PA one.
    pub worst_violations: u64,
}

pub fn run_sum_utility_sweep(cfg: &SweepConfig) -> Result<Vec<SumUtilityRow>> {
    cfg.validate()?;
    (0..cfg.snr_db_values.len())
        .map(|i| {
            let outcomes = run_trials(cfg, i)?;
            let mut sums = [0.0f64; 4];
            let (mut best_v, mut worst_v) = (0u64, 0u64);
            for o in &outcomes {
                sums[0] += o.pa_best;
                sums[1] += o.pa_worst;
                sums[2] += o.cs_best;
                sums[3] += o.cs_worst;
                best_v += u64::from(o.cs_best < o.pa_best);
                worst_v += u64::from(o.cs_worst < o.pa_worst);
            }
            let n = cfg.trials as f64;
            let row = SumUtilityRow {
                snr_db: cfg.snr_db_values[i],
                pa_best_avg: sums[0] / n,
                pa_worst_avg: sums[1] / n,
                cs_best_avg: sums[2] / n,
                cs_worst_avg: sums[3] / n,
                trials: cfg.trials,
                best_violations: best_v,
                worst_violations: worst_v,
            };
            log::info!(
                "{} dB: per-draw violations best {:.4}, worst {:.4}",
                row.snr_db,
                best_v as f64 / n,
                worst_v as f64 / n
            );
            Ok(row)
        })
        .collect()
}

/// Standard deviation of an empirical binomial proportion.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const NE_COUNT_HEADER: &str = "snr_db,pa_a,pa_b,pa_d,pa_other,cs_one,cs_two,trials";
pub const SUM_UTILITY_HEADER: &str = "snr_db,pa_best,pa_worst,cs_best,cs_worst,trials";

pub fn write_ne_count_csv<W: Write>(rows: &[NeCountRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{NE_COUNT_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_sig9(r.snr_db),
            format_sig9(r.pa_type_a_prob),
            format_sig9(r.pa_type_b_prob),
            format_sig9(r.pa_type_d_prob),
            r.pa_other_count,
            format_sig9(r.cs_one_prob),
            format_sig9(r.cs_two_prob),
            r.trials
        )?;
    }
    Ok(())
}

pub fn write_sum_utility_csv<W: Write>(rows: &[SumUtilityRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SUM_UTILITY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig9(r.snr_db),
            format_sig9(r.pa_best_avg),
            format_sig9(r.pa_worst_avg),
            format_sig9(r.cs_best_avg),
            format_sig9(r.cs_worst_avg),
            r.trials
        )?;
    }
    Ok(())
}
