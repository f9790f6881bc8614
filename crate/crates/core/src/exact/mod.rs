//! Exact enumeration of defective parking functions.
//!
//! `cp(n, m, k)` is the number of preference sequences of `m` drivers on a
//! linear car park with `n` spaces that leave exactly `k` drivers unparked.
//! Two independent routes compute it:
//!
//! - [`defect_count_recurrence`]: the last-space recurrence tabulated in a
//!   [`DefectTable`];
//! - [`defect_count_explicit`]: differences of the Abel-type tail sums
//!   `S(n, m, k)` from [`AbelSums`].
//!
//! All arithmetic is exact.

mod abel;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::Count;

pub use abel::{abel_identity_holds, tail_upper_bound, AbelSums};
pub use table::{DefectTable, TableParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// No spaces but at least one driver; the process is undefined.
    #[error("no parking spaces for {m} drivers (n = 0 requires m = 0)")]
    NoSpaces { m: u32 },
    /// Pollak's formula needs `m <= n`; the number of full-success sequences is zero.
    #[error("{m} drivers cannot all park in {n} spaces (count is 0)")]
    MoreDriversThanSpaces { n: u32, m: u32 },
}

/// `n` spaces, `m` drivers, defect `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParkingParams {
    pub n: u32,
    pub m: u32,
    pub k: u32,
}

impl ParkingParams {
    pub fn new(n: u32, m: u32, k: u32) -> Self {
        ParkingParams { n, m, k }
    }

    /// The `(r, s, k)` triple of the recurrence: `(n - m + k, m - k, k)`.
    pub fn table_params(self) -> TableParams {
        let (n, m, k) = (i64::from(self.n), i64::from(self.m), i64::from(self.k));
        TableParams::new(n - m + k, m - k, k)
    }
}

/// `cp(n, m, k)` for one `(n, m)` and every `k = 0..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectDistribution {
    pub n: u32,
    pub m: u32,
    pub counts: Vec<Count>,
}

impl DefectDistribution {
    /// Σ_k counts[k]; equals `n^m` for a complete distribution.
    pub fn total(&self) -> Count {
        self.counts.iter().sum()
    }

    /// `counts[k] / n^m` for each `k`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = Count::pow(u64::from(self.n), self.m);
        self.counts.iter().map(|c| c.ratio(&total)).collect()
    }

    /// Number of sequences with defect at least `k`.
    pub fn tail(&self, k: usize) -> Count {
        self.counts.iter().skip(k).sum()
    }
}

/// `cp(n, m, k)` by the recurrence, i.e. `a(n - m + k, m - k, k)`.
///
/// Zero whenever `n - m + k < 0` or `m - k < 0`.
pub fn defect_count_recurrence(p: ParkingParams) -> Count {
    let t = p.table_params();
    if t.r < 0 || t.s < 0 {
        return Count::ZERO;
    }
    let table = DefectTable::build(t.r as usize, t.s as usize, t.k as usize);
    table
        .get(t)
        .expect("table built to cover its own query")
        .clone()
}

/// `S(n, m, k)`: sequences leaving at least `k` drivers unparked (reference form).
pub fn tail_sum(p: ParkingParams) -> Count {
    AbelSums::new(p.n, p.m).tail(p.k)
}

/// `S(n, m, k)` through the alternating complement of Abel's identity.
pub fn tail_sum_alternating(p: ParkingParams) -> Count {
    AbelSums::new(p.n, p.m).tail_alternating(p.k)
}

/// `cp(n, m, k) = S(n, m, k) - S(n, m, k + 1)`.
pub fn defect_count_explicit(p: ParkingParams) -> Count {
    AbelSums::new(p.n, p.m).defect_count(p.k)
}

/// Sequences in which all `m` drivers park: `(n + 1 - m)(n + 1)^(m - 1)`.
///
/// For `m > n` the count is zero, reported as
/// [`ExactError::MoreDriversThanSpaces`].
pub fn parking_function_count(n: u32, m: u32) -> Result<Count, ExactError> {
    if m > n {
        return Err(ExactError::MoreDriversThanSpaces { n, m });
    }
    if m == 0 {
        return Ok(Count::one());
    }
    let free = Count::from(u64::from(n + 1 - m));
    Ok(&free * &Count::pow(u64::from(n) + 1, m - 1))
}

/// Checks Abel's binomial identity at the integer point `(a, b, m)`.
pub fn abel_identity_check(a: u32, b: u32, m: u32) -> bool {
    abel_identity_holds(a, b, m)
}

/// The full row `cp(n, m, 0..=m)` from the Abel sums.
pub fn defect_distribution(n: u32, m: u32) -> Result<DefectDistribution, ExactError> {
    if n == 0 && m > 0 {
        return Err(ExactError::NoSpaces { m });
    }
    let sums = AbelSums::new(n, m);
    let tails: Vec<Count> = (0..=m + 1).map(|k| sums.tail(k)).collect();
    let counts = tails
        .windows(2)
        .map(|w| w[0].checked_sub(&w[1]).expect("tail sums are monotone"))
        .collect();
    Ok(DefectDistribution { n, m, counts })
}

/// `S(n, m, k) <= (m! / (m-k)!) · n^(m-k)`. Requires `k <= m`.
pub fn tail_upper_bound_check(p: ParkingParams) -> bool {
    tail_sum(p) <= tail_upper_bound(p.n, p.m, p.k)
}
