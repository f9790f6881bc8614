//! Abel-type partial sums.
//!
//! `S(n, m, k)` counts the preference sequences of `m` drivers on `n` spaces
//! that send at least `k` drivers home. With `l = n - m + k > 0`,
//!
//! ```text
//! S(n,m,k) = Σ_{i=0}^{m-k} C(m,i) · l(l+i)^(i-1) · (m-k-i)^(m-i)
//! ```
//!
//! and `S(n,m,k) = n^m` when `l <= 0`. The factor `l(l+i)^(i-1)` is the
//! number of ways `i` drivers park on `l + i - 1` spaces, so `i = 0` gives 1
//! and the whole sum stays in the integers. The terms are the partial sums of
//! Abel's binomial identity, which also yields the shorter alternating form
//! in [`AbelSums::tail_alternating`].

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::count::{binomial_row, Count, SignedCount};

/// Sums with this many terms or more are evaluated on the rayon pool.
const PARALLEL_TERMS: usize = 48;

/// `S(n, m, ·)` evaluator for a fixed `(n, m)` with the binomial row `C(m, ·)` cached.
#[derive(Clone, Debug)]
pub struct AbelSums {
    n: u32,
    m: u32,
    binom: Vec<BigUint>,
}

impl AbelSums {
    pub fn new(n: u32, m: u32) -> Self {
        AbelSums {
            n,
            m,
            binom: binomial_row(m),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `n^m`.
    pub fn total(&self) -> Count {
        Count::pow(u64::from(self.n), self.m)
    }

    // l = n - m + k, or None when every sequence qualifies (l <= 0)
    fn empty_spaces(&self, k: u32) -> Option<u64> {
        let l = i64::from(self.n) - i64::from(self.m) + i64::from(k);
        (l > 0).then_some(l as u64)
    }

    /// Reference form of `S(n, m, k)`: the sum of `m - k + 1` nonnegative terms.
    pub fn tail(&self, k: u32) -> Count {
        let Some(l) = self.empty_spaces(k) else {
            return self.total();
        };
        if k > self.m {
            return Count::ZERO;
        }
        let last = self.m - k;
        let term = |i: u32| -> BigUint {
            let parked = if i == 0 {
                BigUint::one()
            } else {
                BigUint::from(l) * BigUint::from(l + u64::from(i)).pow(i - 1)
            };
            let rest = BigUint::from(last - i).pow(self.m - i);
            if rest.is_zero() {
                return rest;
            }
            &self.binom[i as usize] * parked * rest
        };
        let sum: BigUint = if last as usize + 1 >= PARALLEL_TERMS {
            (0..=last)
                .into_par_iter()
                .map(term)
                .reduce(BigUint::zero, |a, b| a + b)
        } else {
            (0..=last).map(term).sum()
        };
        Count::new(sum)
    }

    /// `S(n, m, k)` through the complement of Abel's identity:
    ///
    /// ```text
    /// S(n,m,k) = n^m - Σ_{j=0}^{min(k-1, m)} C(m,j)·(-1)^j·l·(k-j)^j·(n+k-j)^(m-1-j)
    /// ```
    ///
    /// The `j = m` term (reachable only for `k > m`) has the factor
    /// `l·(n+k-m)^(-1) = 1`, so it reduces to `(-1)^m (k-m)^m`.
    ///
    /// Panics if the signed total comes out negative, which can only mean a
    /// defect in this routine.
    pub fn tail_alternating(&self, k: u32) -> Count {
        let Some(l) = self.empty_spaces(k) else {
            return self.total();
        };
        if k == 0 {
            return self.total();
        }
        let (n, m) = (u64::from(self.n), self.m);
        let last = (k - 1).min(m);
        let term = |j: u32| -> SignedCount {
            let magnitude = if j == m {
                BigUint::from(u64::from(k - j)).pow(j)
            } else {
                &self.binom[j as usize]
                    * BigUint::from(l)
                    * BigUint::from(u64::from(k - j)).pow(j)
                    * BigUint::from(n + u64::from(k - j)).pow(m - 1 - j)
            };
            let signed = BigInt::from(magnitude);
            if j.is_multiple_of(2) {
                signed
            } else {
                -signed
            }
        };
        let correction: SignedCount = if last as usize + 1 >= PARALLEL_TERMS {
            (0..=last)
                .into_par_iter()
                .map(term)
                .reduce(BigInt::zero, |a, b| a + b)
        } else {
            (0..=last).map(term).sum()
        };
        let result = BigInt::from(self.total()) - correction;
        Count::try_from(result)
            .unwrap_or_else(|v| panic!("alternating tail sum went negative: S({n},{m},{k}) = {v}"))
    }

    /// Whichever of the two exact forms has fewer terms.
    pub fn tail_shortest(&self, k: u32) -> Count {
        if k > self.m || k <= self.m - k {
            self.tail_alternating(k)
        } else {
            self.tail(k)
        }
    }

    /// `cp(n, m, k) = S(n, m, k) - S(n, m, k + 1)` from the reference form.
    pub fn defect_count(&self, k: u32) -> Count {
        difference(self.tail(k), self.tail(k + 1), self.n, self.m, k)
    }

    /// `cp(n, m, k)` from [`tail_shortest`](Self::tail_shortest).
    pub fn defect_count_shortest(&self, k: u32) -> Count {
        difference(
            self.tail_shortest(k),
            self.tail_shortest(k + 1),
            self.n,
            self.m,
            k,
        )
    }
}

fn difference(upper: Count, lower: Count, n: u32, m: u32, k: u32) -> Count {
    upper
        .checked_sub(&lower)
        .unwrap_or_else(|| panic!("tail sums not monotone at ({n},{m},{k})"))
}

/// Exact check of Abel's binomial identity at nonnegative integers:
/// `Σ_{i=0}^m C(m,i)·a(a+i)^(i-1)·(b-i)^(m-i) = (a+b)^m`.
///
/// `a(a+i)^(i-1)` is read as 1 at `i = 0` and `0^0 = 1`. The factor `b - i`
/// can be negative, so the sum is accumulated in signed arithmetic.
pub fn abel_identity_holds(a: u32, b: u32, m: u32) -> bool {
    let binom = binomial_row(m);
    let lhs: BigInt = (0..=m)
        .map(|i| {
            let lead = if i == 0 {
                BigInt::one()
            } else {
                BigInt::from(a) * BigInt::from(a + i).pow(i - 1)
            };
            let tail = BigInt::from(i64::from(b) - i64::from(i)).pow(m - i);
            BigInt::from(binom[i as usize].clone()) * lead * tail
        })
        .sum();
    lhs == BigInt::from(a + b).pow(m)
}

/// `(m! / (m-k)!) · n^(m-k)`, the falling-factorial bound on `S(n, m, k)`.
/// Requires `k <= m`.
pub fn tail_upper_bound(n: u32, m: u32, k: u32) -> Count {
    assert!(k <= m, "tail bound needs k <= m");
    let falling: BigUint = (m - k + 1..=m).map(BigUint::from).product();
    Count::new(falling * BigUint::from(n).pow(m - k))
}
