//! Cross-method invariant suites.
//!
//! Each check compares independent routes to the same quantity and reports
//! a named pass/fail line. The explicit-formula route goes through
//! [`Verifier::tail_sum`], which can be swapped out to confirm that a broken
//! implementation is caught.

use std::f64::consts::E;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;

use crate::asymptotics::{density_integral_check, full_lot_series, inverse_e, phi, tree_function};
use crate::count::{signed_ratio_to_f64, Count};
use crate::exact::{
    abel_identity_check, parking_function_count, tail_sum, tail_upper_bound, AbelSums, DefectTable,
    ParkingParams,
};
use crate::sim::{
    enumerate_exhaustive, park, park_naive, sample_empirical, stream, uniform_choice,
    PreferenceSequence, Seed, DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<28} {:>7.2}s  {}",
            self.name, self.seconds, self.detail
        )
    }
}

pub type TailSumFn = fn(ParkingParams) -> Count;

#[derive(Clone, Copy, Debug)]
pub struct Verifier {
    pub tail_sum: TailSumFn,
    pub enumeration_cap: u64,
    pub seed: Seed,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            tail_sum,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            seed: Seed(2008),
        }
    }
}

type Outcome = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, fail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(fail())
    }
}

impl Verifier {
    fn tail(&self, n: u32, m: u32, k: u32) -> Count {
        (self.tail_sum)(ParkingParams::new(n, m, k))
    }

    fn explicit(&self, n: u32, m: u32, k: u32) -> Result<Count, String> {
        self.tail(n, m, k)
            .checked_sub(&self.tail(n, m, k + 1))
            .ok_or_else(|| format!("S({n},{m},{k}) < S({n},{m},{})", k + 1))
    }

    /// Runs every check at `level`.
    pub fn run(&self, level: Level) -> Vec<CheckResult> {
        let mut checks: Vec<Check<'_>> = vec![
            ("published_table", Box::new(|| self.published_table())),
            ("three_way_equivalence", Box::new(|| self.three_way())),
            ("row_sums", Box::new(|| self.row_sums())),
            ("support", Box::new(|| self.support())),
            ("monotone_tail", Box::new(|| self.monotone_tail())),
            (
                "zero_defect_closed_form",
                Box::new(|| self.zero_defect_slice()),
            ),
            ("pollak", Box::new(|| self.pollak())),
            ("special_cases", Box::new(|| self.special_cases())),
            ("abel_identity", Box::new(|| self.abel())),
            ("tail_upper_bound", Box::new(|| self.upper_bound())),
            ("oracle_equivalence", Box::new(move || self.oracle(level))),
            (
                "fast_park_matches_naive",
                Box::new(|| self.park_agreement()),
            ),
            ("tree_function", Box::new(|| self.tree())),
            ("density_integral", Box::new(|| self.density())),
            ("full_lot_series", Box::new(|| self.series())),
        ];
        if level == Level::Full {
            checks.push(("phi_consistency", Box::new(|| self.phi_consistency())));
            checks.push(("ratio_limits", Box::new(|| self.ratio_limits())));
            checks.push(("rayleigh_trend", Box::new(|| self.rayleigh_trend())));
            checks.push(("monte_carlo", Box::new(|| self.monte_carlo())));
        }
        checks
            .into_iter()
            .map(|(name, check)| {
                let start = Instant::now();
                let outcome = check();
                let seconds = start.elapsed().as_secs_f64();
                let (passed, detail) = match outcome {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                CheckResult {
                    name,
                    passed,
                    detail,
                    seconds,
                }
            })
            .collect()
    }

    fn published_table(&self) -> Outcome {
        let table = DefectTable::for_parking(10, 10);
        for (i, row) in PUBLISHED_TABLE.iter().enumerate() {
            let n = i as u32 + 1;
            for (k, &want) in row.iter().enumerate() {
                let want = Count::from(want);
                let k = k as u32;
                let rec = table.defect_count(n, n, k).expect("in bounds");
                ensure(rec == &want, || {
                    format!("recurrence cp({n},{n},{k}) = {rec}, want {want}")
                })?;
                let exp = self.explicit(n, n, k)?;
                ensure(exp == want, || {
                    format!("explicit cp({n},{n},{k}) = {exp}, want {want}")
                })?;
            }
        }
        Ok("55 values, both routes".into())
    }

    fn three_way(&self) -> Outcome {
        let table = DefectTable::for_parking(12, 14);
        let mut checked = 0;
        for n in 1..=12 {
            for m in 0..=14 {
                let alt = AbelSums::new(n, m);
                for k in 0..=m {
                    let rec = table.defect_count(n, m, k).expect("in bounds");
                    let exp = self.explicit(n, m, k)?;
                    ensure(rec == &exp, || {
                        format!("cp({n},{m},{k}): recurrence {rec}, explicit {exp}")
                    })?;
                    let (s, a) = (self.tail(n, m, k), alt.tail_alternating(k));
                    ensure(s == a, || format!("S({n},{m},{k}): {s} vs alternating {a}"))?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} triples"))
    }

    fn row_sums(&self) -> Outcome {
        for n in 1..=12 {
            for m in 0..=14 {
                let sum: Count = (0..=m)
                    .map(|k| self.explicit(n, m, k))
                    .sum::<Result<Count, _>>()?;
                let want = Count::pow(u64::from(n), m);
                ensure(sum == want, || {
                    format!("Σ_k cp({n},{m},k) = {sum}, want {want}")
                })?;
            }
        }
        Ok("n <= 12, m <= 14".into())
    }

    fn support(&self) -> Outcome {
        for n in 1..=12u32 {
            for m in 0..=14u32 {
                for k in 0..m.saturating_sub(n) {
                    let c = self.explicit(n, m, k)?;
                    ensure(c.is_zero(), || {
                        format!("cp({n},{m},{k}) = {c} below support")
                    })?;
                }
                if m >= 1 {
                    let c = self.explicit(n, m, m)?;
                    ensure(c.is_zero(), || {
                        format!("cp({n},{m},{m}) = {c}, first driver always parks")
                    })?;
                }
            }
            let c = self.explicit(n, n, n - 1)?;
            ensure(c == Count::one(), || {
                format!("cp({n},{n},{}) = {c}, want 1", n - 1)
            })?;
        }
        Ok("n <= 12, m <= 14".into())
    }

    fn monotone_tail(&self) -> Outcome {
        for n in 0..=12 {
            for m in 0..=14 {
                for k in 0..=m + 1 {
                    let (a, b) = (self.tail(n, m, k), self.tail(n, m, k + 1));
                    ensure(a >= b, || {
                        format!("S({n},{m},{k}) = {a} < S({n},{m},{}) = {b}", k + 1)
                    })?;
                }
            }
        }
        Ok("n <= 12, m <= 14".into())
    }

    fn zero_defect_slice(&self) -> Outcome {
        let table = DefectTable::build(20, 20, 0);
        for r in 0..=20u32 {
            for s in 0..=20u32 {
                let got = table
                    .get(crate::exact::TableParams::new(r.into(), s.into(), 0))
                    .expect("in bounds");
                let want = parking_function_count(r + s, s).map_err(|e| e.to_string())?;
                ensure(got == &want, || {
                    format!("a({r},{s},0) = {got}, want {want}")
                })?;
            }
        }
        Ok("r, s <= 20".into())
    }

    fn pollak(&self) -> Outcome {
        for n in 0..=20 {
            for m in 0..=n {
                let want = parking_function_count(n, m).map_err(|e| e.to_string())?;
                let got = self.explicit(n, m, 0)?;
                ensure(got == want, || {
                    format!("cp({n},{m},0) = {got}, want {want}")
                })?;
            }
        }
        Ok("0 <= m <= n <= 20".into())
    }

    fn special_cases(&self) -> Outcome {
        for n in 2..=20u32 {
            let nn = BigInt::from(n).pow(n);
            let s2 = &nn - 2 * BigInt::from(n + 2).pow(n - 1)
                + 2 * BigInt::from(n) * BigInt::from(n + 1).pow(n - 2);
            let got = BigInt::from(self.tail(n, n, 2));
            ensure(got == s2, || format!("S({n},{n},2) = {got}, want {s2}"))?;
            let s = BigInt::from(2).pow(n) + BigInt::from(n) * BigInt::from(n - 2);
            let got = BigInt::from(self.tail(n, n, n - 2));
            ensure(got == s, || {
                format!("S({n},{n},{}) = {got}, want {s}", n - 2)
            })?;
        }
        Ok("S(n,n,2) and S(n,n,n-2), n <= 20".into())
    }

    fn abel(&self) -> Outcome {
        for a in 0..=8 {
            for b in 0..=8 {
                for m in 0..=8 {
                    ensure(abel_identity_check(a, b, m), || {
                        format!("fails at ({a},{b},{m})")
                    })?;
                }
            }
        }
        Ok("[0,8]^3".into())
    }

    fn upper_bound(&self) -> Outcome {
        for n in 0..=15 {
            for m in 0..=15 {
                for k in 0..=m {
                    let (s, bound) = (self.tail(n, m, k), tail_upper_bound(n, m, k));
                    ensure(s <= bound, || format!("S({n},{m},{k}) = {s} > {bound}"))?;
                }
            }
        }
        Ok("n, m <= 15".into())
    }

    fn oracle(&self, level: Level) -> Outcome {
        let pairs = match level {
            Level::Quick => quick_oracle_pairs(),
            Level::Full => oracle_pairs(1_000_000),
        };
        for &(n, m) in &pairs {
            let brute = enumerate_exhaustive(n as usize, m as usize, self.enumeration_cap)
                .map_err(|e| format!("({n},{m}): {e}"))?;
            for (k, c) in brute.counts.iter().enumerate() {
                let exp = self.explicit(n, m, k as u32)?;
                ensure(&exp == c, || {
                    format!("cp({n},{m},{k}): enumeration {c}, explicit {exp}")
                })?;
            }
        }
        Ok(format!("{} (n, m) pairs", pairs.len()))
    }

    fn park_agreement(&self) -> Outcome {
        let mut rng = stream(self.seed, 1 << 32);
        for trial in 0..10_000 {
            let n = uniform_choice(&mut rng, 30) as usize;
            let m = uniform_choice(&mut rng, 40) as usize - 1;
            let choices = (0..m)
                .map(|_| uniform_choice(&mut rng, n as u64) as usize)
                .collect();
            let prefs = PreferenceSequence::new(n, choices).expect("choices drawn in range");
            let (fast, slow) = (park(&prefs), park_naive(&prefs));
            ensure(fast == slow, || format!("instance {trial}: {prefs:?}"))?;
        }
        Ok("10^4 random instances".into())
    }

    fn tree(&self) -> Outcome {
        let top = inverse_e();
        let mut prev = -1.0;
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let v = top * i as f64 / 999.0;
            let t = tree_function(v).map_err(|e| e.to_string())?;
            let residual = (t * (-t).exp() - v).abs();
            worst = worst.max(residual);
            ensure(residual <= 1e-12, || {
                format!("residual {residual:e} at v = {v}")
            })?;
            ensure(t > prev, || format!("not increasing at v = {v}"))?;
            prev = t;
        }
        Ok(format!("max residual {worst:.1e}"))
    }

    fn density(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for x in [0.25, 0.5, 1.0, 2.0] {
            for y in [-1.0, 0.0, 0.5] {
                if x <= y {
                    continue;
                }
                let got = density_integral_check(x, y).map_err(|e| e.to_string())?;
                let err = (got - (-2.0 * x * (x - y)).exp()).abs();
                worst = worst.max(err);
                ensure(err <= 1e-6, || format!("({x},{y}): error {err:e}"))?;
            }
        }
        Ok(format!("max error {worst:.1e}"))
    }

    fn series(&self) -> Outcome {
        for lambda in [0.2f64, 0.5, 2.0, 4.0] {
            let want = tree_function(lambda * (-lambda).exp()).map_err(|e| e.to_string())? / lambda;
            let got = full_lot_series(lambda, 400).map_err(|e| e.to_string())?;
            ensure((got - want).abs() <= 1e-10, || {
                format!("λ = {lambda}: {got} vs {want}")
            })?;
        }
        // At λ = 1 the terms decay like i^{-3/2}: check the error shrinks.
        let errs: Vec<f64> = [100, 1000, 10_000]
            .iter()
            .map(|&t| (1.0 - full_lot_series(1.0, t).unwrap()).abs())
            .collect();
        ensure(errs.windows(2).all(|w| w[1] < w[0]), || {
            format!("λ = 1 errors {errs:?}")
        })?;
        Ok("λ ∈ {0.2, 0.5, 2, 4} to 1e-10; λ = 1 converging".into())
    }

    fn phi_consistency(&self) -> Outcome {
        let mut lines = Vec::new();
        for k in 1..=3u32 {
            let err_at = |n: u32| {
                let sums = AbelSums::new(n, n);
                let total = sums.total();
                let diff = BigInt::from(sums.tail_shortest(k)) - BigInt::from(total.clone());
                let scaled = signed_ratio_to_f64(&(diff * BigInt::from(n)), total.as_biguint());
                (scaled - phi(0, k)).abs()
            };
            let (e1, e4) = (err_at(1000), err_at(4000));
            ensure(e4 < e1, || {
                format!("k = {k}: error {e4:e} at 4000 vs {e1:e} at 1000")
            })?;
            lines.push(format!("k={k}: {e1:.2e} -> {e4:.2e}"));
        }
        Ok(lines.join(", "))
    }

    fn ratio_limits(&self) -> Outcome {
        let limits = [(1u32, 2.0 * E - 3.0), (2, 3.0 * E * E - 8.0 * E + 3.5)];
        let mut lines = Vec::new();
        for (k, limit) in limits {
            let errs: Vec<f64> = [250u32, 1000, 4000]
                .iter()
                .map(|&n| (exact_defect_ratio(n, k) - limit).abs())
                .collect();
            ensure(errs.windows(2).all(|w| w[1] < w[0]), || {
                format!("k = {k}: errors {errs:?}")
            })?;
            ensure(errs[2] <= 5e-2, || {
                format!("k = {k}: error {} at n = 4000", errs[2])
            })?;
            lines.push(format!("k={k}: {:.2e}", errs[2]));
        }
        Ok(lines.join(", "))
    }

    fn rayleigh_trend(&self) -> Outcome {
        let errs: Vec<f64> = [100u32, 400, 1600]
            .iter()
            .map(|&n| (rayleigh_tail_at(n) - (-2.0f64).exp()).abs())
            .collect();
        ensure(errs.windows(2).all(|w| w[1] < w[0]), || {
            format!("errors {errs:?}")
        })?;
        ensure(errs[2] <= 0.05, || format!("error {} at n = 1600", errs[2]))?;
        Ok(format!(
            "errors {:.2e} {:.2e} {:.2e}",
            errs[0], errs[1], errs[2]
        ))
    }

    fn monte_carlo(&self) -> Outcome {
        let trials = 100_000u64;
        let sample = sample_empirical(100, 100, trials, self.seed).map_err(|e| e.to_string())?;
        let sums = AbelSums::new(100, 100);
        let total = sums.total();
        let mut lines = Vec::new();
        for k in [5u32, 10, 20] {
            let p = sums.tail(k).ratio(&total);
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let z = (sample.tail_frequency(k as usize) - p) / se;
            ensure(z.abs() <= 4.0, || format!("k = {k}: z = {z:.2}"))?;
            lines.push(format!("k={k}: z={z:+.2}"));
        }
        Ok(lines.join(", "))
    }
}

/// `cp(n, n, k) / cp(n, n, 0)` from exact counts.
pub fn exact_defect_ratio(n: u32, k: u32) -> f64 {
    let sums = AbelSums::new(n, n);
    let numerator = sums.defect_count_shortest(k);
    let denominator = parking_function_count(n, n).expect("m = n");
    numerator.ratio(&denominator)
}

/// `S(n, n, ⌊√n⌋) / n^n` from exact counts.
pub fn rayleigh_tail_at(n: u32) -> f64 {
    let k = (f64::from(n).sqrt().floor()) as u32;
    let sums = AbelSums::new(n, n);
    sums.tail(k).ratio(&sums.total())
}

/// All `(n, m)` with `1 <= n <= 64`, `m <= 20` and `n^m <= limit`.
pub fn oracle_pairs(limit: u64) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for n in 1..=64u32 {
        for m in 0..=20u32 {
            if u64::from(n).checked_pow(m).is_some_and(|v| v <= limit) {
                pairs.push((n, m));
            }
        }
    }
    pairs
}

fn quick_oracle_pairs() -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (1..=6).flat_map(|n| (0..=6).map(move |m| (n, m))).collect();
    pairs.extend((7..=19).map(|m| (2, m)));
    pairs.extend((7..=12).map(|m| (3, m)));
    pairs
}

/// `cp(n, n, k)` for `n = 1..=10`, `k = 0..n`.
pub const PUBLISHED_TABLE: [&[u64]; 10] = [
    &[1],
    &[3, 1],
    &[16, 10, 1],
    &[125, 107, 23, 1],
    &[1296, 1346, 436, 46, 1],
    &[16807, 19917, 8402, 1442, 87, 1],
    &[262144, 341986, 173860, 41070, 4320, 162, 1],
    &[4782969, 6713975, 3924685, 1166083, 176843, 12357, 303, 1],
    &[
        100000000, 148717762, 96920092, 34268902, 6768184, 710314, 34660, 574, 1,
    ],
    &[
        2357947691, 3674435393, 2612981360, 1059688652, 256059854, 36046214, 2743112, 96620, 1103,
        1,
    ],
];
