//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::E;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use parking_core::asymptotics::{
    density_integral_check, full_lot_limit, full_lot_series, inverse_e, pmf_approx,
    substituted_integral, tree_function,
};
use parking_core::exact::{
    abel_identity_check, defect_count_explicit, defect_distribution, parking_function_count,
    tail_sum, tail_sum_alternating, AbelSums, DefectTable, ParkingParams,
};
use parking_core::sim::{enumerate_exhaustive, sample_empirical, Seed, DEFAULT_ENUMERATION_CAP};
use parking_core::verify::{oracle_pairs, rayleigh_tail_at, PUBLISHED_TABLE};
use parking_core::Count;

/// Seed for the Monte Carlo calibration criterion.
const MONTE_CARLO_SEED: Seed = Seed(2008);

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, fail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(fail())
    }
}

fn p(n: u32, m: u32, k: u32) -> ParkingParams {
    ParkingParams::new(n, m, k)
}

fn published_table() -> Outcome {
    let table = DefectTable::for_parking(10, 10);
    let mut checked = 0;
    for (i, row) in PUBLISHED_TABLE.iter().enumerate() {
        let n = i as u32 + 1;
        for (k, &want) in row.iter().enumerate() {
            let (k, want) = (k as u32, Count::from(want));
            let rec = table.defect_count(n, n, k).expect("within table bounds");
            ensure(rec == &want, || {
                format!("recurrence cp({n},{n},{k}) = {rec}, published {want}")
            })?;
            let exp = defect_count_explicit(p(n, n, k));
            ensure(exp == want, || {
                format!("explicit cp({n},{n},{k}) = {exp}, published {want}")
            })?;
            checked += 1;
        }
    }
    ensure(checked == 55, || format!("{checked} values checked"))?;
    Ok("55/55 values, recurrence and explicit".into())
}

fn oracle_equivalence() -> Outcome {
    let pairs = oracle_pairs(1_000_000);
    for &(n, m) in &pairs {
        let brute = enumerate_exhaustive(n as usize, m as usize, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| format!("({n},{m}): {e}"))?;
        let exact = defect_distribution(n, m).map_err(|e| e.to_string())?;
        ensure(brute == exact, || {
            format!("({n},{m}): {:?} vs {:?}", brute.counts, exact.counts)
        })?;
    }
    Ok(format!("{} (n, m) pairs with n^m <= 10^6", pairs.len()))
}

fn pollak() -> Outcome {
    for n in 0..=20 {
        for m in 0..=n {
            let want = parking_function_count(n, m).map_err(|e| e.to_string())?;
            let got = defect_count_explicit(p(n, m, 0));
            ensure(got == want, || {
                format!("cp({n},{m},0) = {got}, formula {want}")
            })?;
        }
    }
    Ok("231 pairs, 0 <= m <= n <= 20".into())
}

fn abel() -> Outcome {
    for a in 0..=8 {
        for b in 0..=8 {
            for m in 0..=8 {
                ensure(abel_identity_check(a, b, m), || {
                    format!("fails at ({a},{b},{m})")
                })?;
            }
        }
    }
    Ok("729 grid points".into())
}

fn row_sums() -> Outcome {
    for n in 1..=12 {
        for m in 0..=14 {
            let dist = defect_distribution(n, m).map_err(|e| e.to_string())?;
            let want = Count::pow(u64::from(n), m);
            ensure(dist.total() == want, || {
                format!("({n},{m}): {} vs {want}", dist.total())
            })?;
        }
    }
    Ok("n <= 12, m <= 14".into())
}

fn tail_forms() -> Outcome {
    let mut checked = 0;
    for n in 0..=12 {
        for m in 0..=12 {
            for k in 0..=m + 1 {
                let (a, b) = (tail_sum(p(n, m, k)), tail_sum_alternating(p(n, m, k)));
                ensure(a == b, || format!("S({n},{m},{k}): {a} vs {b}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} triples"))
}

fn ratio_limits() -> Outcome {
    let limits = [(1u32, 2.0 * E - 3.0), (2, 3.0 * E * E - 8.0 * E + 3.5)];
    let sizes = [250u32, 1000, 4000];
    let mut report = Vec::new();
    for (k, limit) in limits {
        let mut errors = Vec::new();
        for &n in &sizes {
            let sums = AbelSums::new(n, n);
            let numerator = sums.defect_count(k);
            ensure(numerator == sums.defect_count_shortest(k), || {
                format!("forms disagree at n = {n}")
            })?;
            let denominator = parking_function_count(n, n).map_err(|e| e.to_string())?;
            errors.push((numerator.ratio(&denominator) - limit).abs());
        }
        ensure(errors.windows(2).all(|w| w[1] < w[0]), || {
            format!("k = {k}: errors not decreasing {errors:?}")
        })?;
        ensure(errors[2] <= 5e-2, || {
            format!("k = {k}: error {:e} at n = 4000", errors[2])
        })?;
        report.push(format!(
            "k={k} errors {:.1e}/{:.1e}/{:.1e}",
            errors[0], errors[1], errors[2]
        ));
    }
    Ok(report.join("; "))
}

fn rayleigh_trend() -> Outcome {
    let target = (-2.0f64).exp();
    let errors: Vec<f64> = [100u32, 400, 1600]
        .iter()
        .map(|&n| (rayleigh_tail_at(n) - target).abs())
        .collect();
    ensure(errors.windows(2).all(|w| w[1] < w[0]), || {
        format!("errors not decreasing {errors:?}")
    })?;
    ensure(errors[2] <= 0.05, || {
        format!("error {} at n = 1600", errors[2])
    })?;
    Ok(format!(
        "errors {:.1e}/{:.1e}/{:.1e}",
        errors[0], errors[1], errors[2]
    ))
}

fn proof_integral() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for x in [0.25, 0.5, 1.0, 2.0] {
        for y in [-1.0, 0.0, 0.5] {
            if x <= y {
                continue;
            }
            let got = density_integral_check(x, y).map_err(|e| e.to_string())?;
            let want = (-2.0f64 * x * (x - y)).exp();
            let err = (got - want).abs();
            ensure(err <= 1e-6, || format!("({x},{y}): error {err:e}"))?;
            let second = substituted_integral(x, y).map_err(|e| e.to_string())?;
            ensure((second - want).abs() <= 1e-6, || {
                format!("({x},{y}): substituted route gives {second}")
            })?;
            worst = worst.max(err);
            points += 1;
        }
    }
    Ok(format!("{points} grid points, max error {worst:.1e}"))
}

fn tree_fidelity() -> Outcome {
    let top = inverse_e();
    let mut worst: f64 = 0.0;
    let mut previous = -1.0;
    for i in 0..1000 {
        let v = top * f64::from(i) / 999.0;
        let t = tree_function(v).map_err(|e| e.to_string())?;
        let residual = (t * (-t).exp() - v).abs();
        ensure(residual <= 1e-12, || {
            format!("residual {residual:e} at v = {v}")
        })?;
        ensure(t > previous, || format!("not increasing at v = {v}"))?;
        worst = worst.max(residual);
        previous = t;
    }
    for lambda in [0.1f64, 0.5, 0.9, 1.0] {
        let t = tree_function(lambda * (-lambda).exp()).map_err(|e| e.to_string())?;
        ensure((t - lambda).abs() <= 1e-10, || {
            format!("T(λe^-λ) = {t} at λ = {lambda}")
        })?;
    }
    for lambda in [0.5f64, 2.0] {
        let want = tree_function(lambda * (-lambda).exp()).map_err(|e| e.to_string())? / lambda;
        let got = full_lot_series(lambda, 200).map_err(|e| e.to_string())?;
        ensure((got - want).abs() <= 1e-10, || {
            format!("series {got} vs {want} at λ = {lambda}")
        })?;
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn pmf_approximation() -> Outcome {
    let n = 100u32;
    let mut worst_overall: f64 = 0.0;
    let mut failures = Vec::new();
    let mut report = Vec::new();
    for m in [90u32, 100, 110] {
        let dist = defect_distribution(n, m).map_err(|e| e.to_string())?;
        let probs = dist.probabilities();
        let mut worst = (0.0f64, 0u32);
        for k in 0..=m {
            let Ok(approx) = pmf_approx(u64::from(n), u64::from(m), u64::from(k)) else {
                continue;
            };
            let err = (probs[k as usize] - approx).abs();
            if err > worst.0 {
                worst = (err, k);
            }
        }
        worst_overall = worst_overall.max(worst.0);
        report.push(format!("m={m} max {:.4} at k={}", worst.0, worst.1));
        if worst.0 > 0.02 {
            failures.push(m);
        }
    }
    let line = report.join("; ");
    if failures.is_empty() {
        Ok(line)
    } else {
        Err(format!(
            "{line} (bound 0.02 exceeded for m in {failures:?})"
        ))
    }
}

fn full_probability(n: u32, m: u32) -> f64 {
    if m < n {
        return 0.0;
    }
    AbelSums::new(n, m)
        .defect_count(m - n)
        .ratio(&Count::pow(u64::from(n), m))
}

fn full_lot_ordering() -> Outcome {
    let mut checked = 0;
    // λ = j/20 on [0.5, 4]; m = ⌊λn⌋ in integer arithmetic
    for j in 10..=80u32 {
        let lambda = f64::from(j) / 20.0;
        if lambda <= 1.0 {
            continue;
        }
        let p10 = full_probability(10, j * 10 / 20);
        let p20 = full_probability(20, j * 20 / 20);
        let limit = full_lot_limit(lambda).map_err(|e| e.to_string())?;
        ensure(p10 >= p20 && p20 >= limit, || {
            format!("λ = {lambda}: {p10} / {p20} / {limit}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} grid points with λ > 1"))
}

fn monte_carlo() -> Outcome {
    let trials = 100_000u64;
    let sample = sample_empirical(100, 100, trials, MONTE_CARLO_SEED).map_err(|e| e.to_string())?;
    let again = sample_empirical(100, 100, trials, MONTE_CARLO_SEED).map_err(|e| e.to_string())?;
    ensure(sample == again, || {
        "replay with the same seed differs".into()
    })?;
    let sums = AbelSums::new(100, 100);
    let total = sums.total();
    let mut report = Vec::new();
    for k in [5u32, 10, 20] {
        let exact = sums.tail(k).ratio(&total);
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = (sample.tail_frequency(k as usize) - exact) / se;
        ensure(z.abs() <= 4.0, || format!("k = {k}: z = {z:.2}"))?;
        report.push(format!("k={k} z={z:+.2}"));
    }
    Ok(format!(
        "seed {}: {}",
        MONTE_CARLO_SEED.0,
        report.join(", ")
    ))
}

const CRITERIA: [Criterion; 13] = [
    Criterion {
        id: 1,
        name: "published table",
        budget: Some(Duration::from_secs(1)),
        run: published_table,
    },
    Criterion {
        id: 2,
        name: "oracle equivalence",
        budget: Some(Duration::from_secs(30)),
        run: oracle_equivalence,
    },
    Criterion {
        id: 3,
        name: "pollak consistency",
        budget: None,
        run: pollak,
    },
    Criterion {
        id: 4,
        name: "abel identity",
        budget: None,
        run: abel,
    },
    Criterion {
        id: 5,
        name: "row sums",
        budget: None,
        run: row_sums,
    },
    Criterion {
        id: 6,
        name: "tail sum forms agree",
        budget: None,
        run: tail_forms,
    },
    Criterion {
        id: 7,
        name: "defect ratio limits",
        budget: Some(Duration::from_secs(60)),
        run: ratio_limits,
    },
    Criterion {
        id: 8,
        name: "rayleigh tail trend",
        budget: None,
        run: rayleigh_trend,
    },
    Criterion {
        id: 9,
        name: "density integral",
        budget: Some(Duration::from_secs(5)),
        run: proof_integral,
    },
    Criterion {
        id: 10,
        name: "tree function fidelity",
        budget: None,
        run: tree_fidelity,
    },
    Criterion {
        id: 11,
        name: "pmf approximation (n=100)",
        budget: None,
        run: pmf_approximation,
    },
    Criterion {
        id: 12,
        name: "full-lot ordering",
        budget: None,
        run: full_lot_ordering,
    },
    Criterion {
        id: 13,
        name: "monte carlo calibration",
        budget: None,
        run: monte_carlo,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(d), Some(b)) if elapsed > b => {
                Err(format!("{d}; took {elapsed:.2?}, budget {b:?}"))
            }
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{status}] criterion {:>2}: {:<26} {:>8.2?}  {detail}",
            c.id, c.name, elapsed
        );
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
