use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parking_core::sim::DEFAULT_ENUMERATION_CAP;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "parking",
    version,
    about = "Exact counts, limits and simulations of the one-way car park"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Record format for data-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Print cp(n, n, k) for n = 1..=N as rows of space-separated counts.
    Table(TableArgs),
    /// Exact defect distribution of m drivers on n spaces.
    Dist(DistArgs),
    /// Exact probabilities next to the large-n approximation.
    #[command(name = "plotdata-fig1")]
    #[serde(rename = "plotdata-fig1")]
    PlotdataFig1(Fig1Args),
    /// Exact full-lot probabilities next to their limit on a λ grid.
    #[command(name = "plotdata-fig2")]
    #[serde(rename = "plotdata-fig2")]
    PlotdataFig2(Fig2Args),
    /// Monte Carlo defect histogram.
    Simulate(SimulateArgs),
    /// Cars sent until the lot is full, one run per seed.
    Coupon(CouponArgs),
    /// Run the cross-method verification checks.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table(_) => "table",
            Command::Dist(_) => "dist",
            Command::PlotdataFig1(_) => "plotdata-fig1",
            Command::PlotdataFig2(_) => "plotdata-fig2",
            Command::Simulate(_) => "simulate",
            Command::Coupon(_) => "coupon",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableArgs {
    /// Largest n.
    #[arg(long = "n", default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Tail sums.
    Abel,
    /// The a(r, s, k) table.
    Recurrence,
    /// All n^m preference sequences.
    Enumerate,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    /// Emit only this defect.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Method::Abel)]
    pub method: Method,
    /// Step budget for --method enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Comma-separated driver counts.
    #[arg(long, value_delimiter = ',', default_values_t = [90, 100, 110])]
    pub m: Vec<u32>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2Args {
    /// Comma-separated space counts.
    #[arg(long, value_delimiter = ',', default_values_t = [10, 20])]
    pub n: Vec<u32>,
    #[arg(long, default_value = "0.5")]
    pub lambda_start: Milli,
    #[arg(long, default_value = "4")]
    pub lambda_stop: Milli,
    #[arg(long, default_value = "0.05")]
    pub lambda_step: Milli,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 2008)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouponArgs {
    #[arg(long)]
    pub n: usize,
    /// Number of runs; run i uses seed + i.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
    /// Step budget for exhaustive enumeration checks.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    #[arg(long, default_value_t = 2008)]
    pub seed: u64,
}

/// Nonnegative decimal with at most three fractional digits, held exactly
/// in thousandths so that grid points and `⌊λn⌋` involve no rounding.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Milli(pub u32);

impl Milli {
    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 1000.0
    }

    /// `⌊self · n⌋`.
    pub fn floor_times(self, n: u32) -> u32 {
        (u64::from(self.0) * u64::from(n) / 1000) as u32
    }
}

impl FromStr for Milli {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("`{s}` is not a decimal with at most three fractional digits");
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if whole.is_empty() && frac.is_empty() || frac.len() > 3 {
            return Err(bad());
        }
        if !whole
            .bytes()
            .chain(frac.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: u32 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let frac: u32 = format!("{frac:0<3}").parse().map_err(|_| bad())?;
        whole
            .checked_mul(1000)
            .and_then(|w| w.checked_add(frac))
            .map(Milli)
            .ok_or_else(bad)
    }
}

impl fmt::Display for Milli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frac = format!("{:03}", self.0 % 1000);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            write!(f, "{}", self.0 / 1000)
        } else {
            write!(f, "{}.{frac}", self.0 / 1000)
        }
    }
}

impl Serialize for Milli {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Milli {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn milli_parsing() {
        assert_eq!("0.05".parse(), Ok(Milli(50)));
        assert_eq!("4".parse(), Ok(Milli(4000)));
        assert_eq!(".5".parse(), Ok(Milli(500)));
        assert_eq!("2.125".parse(), Ok(Milli(2125)));
        for bad in ["", ".", "1.2345", "-1", "1e3", "x"] {
            assert!(bad.parse::<Milli>().is_err(), "{bad}");
        }
    }

    #[test]
    fn milli_display_round_trips() {
        for v in [0, 50, 500, 1000, 1050, 2125, 4000] {
            let m = Milli(v);
            assert_eq!(m.to_string().parse(), Ok(m));
        }
        assert_eq!(Milli(50).to_string(), "0.05");
        assert_eq!(Milli(4000).to_string(), "4");
    }

    #[test]
    fn floor_times_is_exact() {
        // 1.4 * 45.0 evaluates to 62.99999999999999
        assert_eq!(Milli(1400).floor_times(45), 63);
        assert_eq!(Milli(2050).floor_times(10), 20);
    }
}
