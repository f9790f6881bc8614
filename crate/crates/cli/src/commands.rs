use std::fs;
use std::io::{self, Write};
use std::path::Path;

use parking_core::asymptotics::{full_lot_limit, pmf_approx};
use parking_core::exact::{defect_distribution, AbelSums, DefectTable, ExactError};
use parking_core::sim::{cars_until_full, enumerate_exhaustive, sample_empirical, SimError};
use parking_core::verify::{self, Verifier};
use parking_core::{Count, DefectDistribution, Seed};
use thiserror::Error;

use crate::args::{
    Cli, Command, CouponArgs, DistArgs, Fig1Args, Fig2Args, Level, Method, SimulateArgs, TableArgs,
    VerifyArgs,
};
use crate::output::{
    config_comment, render, sig15, CouponRecord, DistRecord, Fig1Record, Fig2Record, RunConfig,
    SimRecord,
};

/// Largest `n` and `m` for which `simulate` also reports exact probabilities.
pub const SIMULATE_EXACT_LIMIT: usize = 200;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CapRefused(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::CapRefused(_) => 3,
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::CapExceeded { .. } => CliError::CapRefused(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }
}

/// Runs one parsed invocation, writing to `--out` or standard output.
pub fn run(cli: Cli) -> Result<Status, CliError> {
    let config = RunConfig {
        command: cli.command.clone(),
        format: cli.format,
        out: cli.out.clone(),
    };
    let (text, status) = match &cli.command {
        Command::Table(a) => {
            // the table is plain text; its config goes to standard error
            eprint!("{}", config_comment(&config));
            (table(a)?, Status::Success)
        }
        Command::Dist(a) => (render(&config, dist(a)?), Status::Success),
        Command::PlotdataFig1(a) => (render(&config, fig1(a)?), Status::Success),
        Command::PlotdataFig2(a) => (render(&config, fig2(a)?), Status::Success),
        Command::Simulate(a) => (render(&config, simulate(a)?), Status::Success),
        Command::Coupon(a) => (render(&config, coupon(a)?), Status::Success),
        Command::Verify(a) => verify_report(&config, a),
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(status)
}

fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Rows `n = 1..=n_max` of `cp(n, n, k)`, `k = 0..n`.
pub fn table(a: &TableArgs) -> Result<String, CliError> {
    let n_max = a.n_max;
    let t = DefectTable::for_parking(n_max as usize, n_max as usize);
    let mut out = String::new();
    for n in 1..=n_max {
        let row: Vec<String> = (0..n)
            .map(|k| {
                t.defect_count(n, n, k)
                    .expect("within table bounds")
                    .to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

fn distribution(a: &DistArgs) -> Result<DefectDistribution, CliError> {
    match a.method {
        Method::Abel => Ok(defect_distribution(a.n, a.m)?),
        Method::Recurrence => {
            if a.n == 0 && a.m > 0 {
                return Err(ExactError::NoSpaces { m: a.m }.into());
            }
            let t = DefectTable::for_parking(a.n as usize, a.m as usize);
            let counts = (0..=a.m)
                .map(|k| {
                    t.defect_count(a.n, a.m, k)
                        .cloned()
                        .expect("within table bounds")
                })
                .collect();
            Ok(DefectDistribution {
                n: a.n,
                m: a.m,
                counts,
            })
        }
        Method::Enumerate => Ok(enumerate_exhaustive(a.n as usize, a.m as usize, a.cap)?),
    }
}

pub fn dist(a: &DistArgs) -> Result<Vec<DistRecord>, CliError> {
    if let Some(k) = a.k.filter(|&k| k > a.m) {
        return Err(CliError::Usage(format!("--k {k} exceeds --m {}", a.m)));
    }
    let d = distribution(a)?;
    let total = d.total();
    Ok(d.counts
        .into_iter()
        .zip(0u32..)
        .filter(|&(_, k)| a.k.is_none_or(|want| want == k))
        .map(|(count, k)| {
            let approx = pmf_approx(a.n.into(), a.m.into(), k.into()).ok();
            DistRecord::new(a.n, a.m, k, count, &total, approx)
        })
        .collect())
}

pub fn fig1(a: &Fig1Args) -> Result<Vec<Fig1Record>, CliError> {
    let mut records = Vec::new();
    for &m in &a.m {
        let probs = defect_distribution(a.n, m)?.probabilities();
        for (k, p) in (0u32..).zip(probs) {
            records.push(Fig1Record {
                n: a.n,
                m,
                k,
                exact_probability: sig15(p),
                approx: pmf_approx(a.n.into(), m.into(), k.into()).ok().map(sig15),
            });
        }
    }
    Ok(records)
}

/// `cp(n, m, m - n) / n^m`, zero when `m < n`.
pub fn full_lot_probability(n: u32, m: u32) -> f64 {
    if m < n {
        return 0.0;
    }
    AbelSums::new(n, m)
        .defect_count(m - n)
        .ratio(&Count::pow(n.into(), m))
}

pub fn fig2(a: &Fig2Args) -> Result<Vec<Fig2Record>, CliError> {
    if a.lambda_start.0 == 0 || a.lambda_step.0 == 0 {
        return Err(CliError::Usage(
            "λ grid must be positive with a positive step".into(),
        ));
    }
    if let Some(&n) = a.n.iter().find(|&&n| n == 0) {
        return Err(CliError::Usage(format!("--n {n} must be at least 1")));
    }
    let grid: Vec<_> = (a.lambda_start.0..=a.lambda_stop.0)
        .step_by(a.lambda_step.0 as usize)
        .map(crate::args::Milli)
        .collect();
    let mut records = Vec::new();
    for &n in &a.n {
        for &lambda in &grid {
            let m = lambda.floor_times(n);
            let limit =
                full_lot_limit(lambda.to_f64()).map_err(|e| CliError::Usage(e.to_string()))?;
            records.push(Fig2Record {
                n,
                lambda,
                m,
                exact_full_probability: sig15(full_lot_probability(n, m)),
                limit: sig15(limit),
            });
        }
    }
    Ok(records)
}

pub fn simulate(a: &SimulateArgs) -> Result<Vec<SimRecord>, CliError> {
    let sample = sample_empirical(a.n, a.m, a.trials, Seed(a.seed))?;
    let exact = (a.n <= SIMULATE_EXACT_LIMIT && a.m <= SIMULATE_EXACT_LIMIT)
        .then(|| defect_distribution(a.n as u32, a.m as u32))
        .transpose()?
        .map(|d| d.probabilities());
    Ok(sample
        .histogram
        .iter()
        .zip(sample.frequencies())
        .enumerate()
        .map(|(k, (&hits, freq))| SimRecord {
            n: a.n as u64,
            m: a.m as u64,
            k: k as u64,
            trials: a.trials,
            hits,
            frequency: sig15(freq),
            exact_probability: exact.as_ref().map(|p| sig15(p[k])),
        })
        .collect())
}

pub fn coupon(a: &CouponArgs) -> Result<Vec<CouponRecord>, CliError> {
    (0..a.trials)
        .map(|run| {
            let seed = a.seed.wrapping_add(run);
            let cars = cars_until_full(a.n, Seed(seed))?;
            Ok(CouponRecord {
                n: a.n as u64,
                run,
                seed,
                cars,
            })
        })
        .collect()
}

pub fn verify_report(config: &RunConfig, a: &VerifyArgs) -> (String, Status) {
    let verifier = Verifier {
        enumeration_cap: a.cap,
        seed: Seed(a.seed),
        ..Verifier::default()
    };
    let level = match a.level {
        Level::Quick => verify::Level::Quick,
        Level::Full => verify::Level::Full,
    };
    let results = verifier.run(level);
    let mut text = config_comment(config);
    for r in &results {
        text.push_str(&format!("{r}\n"));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    text.push_str(&format!("{passed} of {} checks passed\n", results.len()));
    let status = if passed == results.len() {
        Status::Success
    } else {
        Status::VerificationFailed
    };
    (text, status)
}
