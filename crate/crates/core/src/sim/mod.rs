//! Direct simulation of the parking process.
//!
//! Drivers arrive in order; each goes to its chosen space and takes the first
//! free space at or after it, or leaves if there is none. This is linear
//! probing in a hash table without wrap-around.

mod rng;

use rayon::prelude::*;
use thiserror::Error;

use crate::count::Count;
use crate::exact::DefectDistribution;

pub use rng::{stream, uniform_choice, Seed};

/// Default bound on exhaustive enumeration work, in driver placements.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// Trials per Monte Carlo block; block `b` draws from random stream `b`.
pub const TRIALS_PER_BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("choice {choice} of driver {driver} is outside 1..={n}")]
    ChoiceOutOfRange {
        driver: usize,
        choice: usize,
        n: usize,
    },
    #[error("no parking spaces for {m} drivers")]
    NoSpaces { m: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("enumeration needs {required} steps, over the cap of {cap}")]
    CapExceeded { required: u128, cap: u64 },
}

/// The drivers' chosen spaces, in arrival order, each in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceSequence {
    n: usize,
    choices: Vec<usize>,
}

impl PreferenceSequence {
    pub fn new(n: usize, choices: Vec<usize>) -> Result<Self, SimError> {
        if let Some((driver, &choice)) = choices.iter().enumerate().find(|(_, &c)| c == 0 || c > n)
        {
            return Err(SimError::ChoiceOutOfRange { driver, choice, n });
        }
        Ok(PreferenceSequence { n, choices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }
}

/// Result of running one preference sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParkOutcome {
    /// Space taken by each driver, `None` for drivers who left.
    pub assignment: Vec<Option<usize>>,
    pub occupied: usize,
    pub defect: usize,
}

/// A car park that fills one driver at a time.
///
/// `next[x]` points toward the first free space `>= x` (union-find with path
/// halving); `n + 1` is the exit.
#[derive(Clone, Debug)]
pub struct CarPark {
    next: Vec<usize>,
    occupied: usize,
}

impl CarPark {
    pub fn new(n: usize) -> Self {
        CarPark {
            next: (0..=n + 1).collect(),
            occupied: 0,
        }
    }

    pub fn spaces(&self) -> usize {
        self.next.len() - 2
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    pub fn is_full(&self) -> bool {
        self.occupied == self.spaces()
    }

    pub fn reset(&mut self) {
        for (i, x) in self.next.iter_mut().enumerate() {
            *x = i;
        }
        self.occupied = 0;
    }

    fn first_free(&mut self, mut x: usize) -> usize {
        while self.next[x] != x {
            let up = self.next[self.next[x]];
            self.next[x] = up;
            x = up;
        }
        x
    }

    /// Parks a driver who chose `choice` (in `1..=n`); returns the space taken.
    pub fn arrive(&mut self, choice: usize) -> Option<usize> {
        let space = self.first_free(choice);
        if space > self.spaces() {
            return None;
        }
        self.next[space] = space + 1;
        self.occupied += 1;
        Some(space)
    }
}

/// Runs the process on `prefs`.
pub fn park(prefs: &PreferenceSequence) -> ParkOutcome {
    let mut lot = CarPark::new(prefs.n);
    let assignment: Vec<Option<usize>> = prefs.choices.iter().map(|&c| lot.arrive(c)).collect();
    let occupied = lot.occupied();
    ParkOutcome {
        defect: assignment.len() - occupied,
        assignment,
        occupied,
    }
}

/// Reference implementation of [`park`] by linear scan, `O(n·m)`.
pub fn park_naive(prefs: &PreferenceSequence) -> ParkOutcome {
    let mut taken = vec![false; prefs.n + 1];
    let assignment: Vec<Option<usize>> = prefs
        .choices
        .iter()
        .map(|&c| {
            let space = (c..=prefs.n).find(|&s| !taken[s])?;
            taken[space] = true;
            Some(space)
        })
        .collect();
    let occupied = assignment.iter().flatten().count();
    ParkOutcome {
        defect: assignment.len() - occupied,
        assignment,
        occupied,
    }
}

/// Work needed to enumerate all `n^m` sequences, counted as `n^m · max(m, 1)`.
pub fn enumeration_steps(n: usize, m: usize) -> u128 {
    let sequences = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    sequences.saturating_mul(m.max(1) as u128)
}

/// Tallies the defect of every one of the `n^m` preference sequences.
///
/// Refuses, rather than truncating, when the work exceeds `cap`.
pub fn enumerate_exhaustive(n: usize, m: usize, cap: u64) -> Result<DefectDistribution, SimError> {
    if n == 0 && m > 0 {
        return Err(SimError::NoSpaces { m });
    }
    let required = enumeration_steps(n, m);
    if required > u128::from(cap) {
        return Err(SimError::CapExceeded { required, cap });
    }
    let mut tally = vec![0u64; m + 1];
    let mut taken = vec![false; n + 1];
    descend(n, m, &mut taken, 0, &mut tally);
    Ok(DefectDistribution {
        n: n as u32,
        m: m as u32,
        counts: tally.into_iter().map(Count::from).collect(),
    })
}

// Depth-first over drivers; undoing a placement is a single flag reset.
fn descend(n: usize, remaining: usize, taken: &mut [bool], defect: usize, tally: &mut [u64]) {
    if remaining == 0 {
        tally[defect] += 1;
        return;
    }
    for choice in 1..=n {
        match (choice..=n).find(|&s| !taken[s]) {
            Some(space) => {
                taken[space] = true;
                descend(n, remaining - 1, taken, defect, tally);
                taken[space] = false;
            }
            None => descend(n, remaining - 1, taken, defect + 1, tally),
        }
    }
}

/// Defect histogram from uniformly random preference sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    /// `histogram[k]` = trials with defect exactly `k`, for `k = 0..=m`.
    pub histogram: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn frequencies(&self) -> Vec<f64> {
        self.histogram
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// Fraction of trials with defect at least `k`.
    pub fn tail_frequency(&self, k: usize) -> f64 {
        let hits: u64 = self.histogram.iter().skip(k).sum();
        hits as f64 / self.trials as f64
    }

    /// Most frequent defect (smallest on ties).
    pub fn mode(&self) -> usize {
        let max = self.histogram.iter().copied().max().unwrap_or(0);
        self.histogram.iter().position(|&c| c == max).unwrap_or(0)
    }
}

/// Runs `trials` uniformly random preference sequences.
///
/// Trials are split into blocks of [`TRIALS_PER_BLOCK`]; block `b` uses
/// random stream `b` of `seed`, so the histogram does not depend on how
/// blocks are scheduled across threads.
pub fn sample_empirical(
    n: usize,
    m: usize,
    trials: u64,
    seed: Seed,
) -> Result<EmpiricalDistribution, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    if n == 0 && m > 0 {
        return Err(SimError::NoSpaces { m });
    }
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    let histogram = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = TRIALS_PER_BLOCK.min(trials - b * TRIALS_PER_BLOCK);
            let mut rng = stream(seed, b);
            let mut lot = CarPark::new(n);
            let mut hist = vec![0u64; m + 1];
            for _ in 0..count {
                lot.reset();
                for _ in 0..m {
                    lot.arrive(uniform_choice(&mut rng, n as u64) as usize);
                }
                hist[m - lot.occupied()] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(EmpiricalDistribution {
        n,
        m,
        trials,
        histogram,
    })
}

/// Sends random cars into one car park until every space is taken and
/// returns how many were sent, including those that left.
///
/// This is the collector who trades each duplicate for the next most
/// valuable missing item: space `j` is item `j`, larger numbers are less
/// valuable, and a car that leaves is a duplicate with nothing left to trade
/// for. Uses random stream 0 of `seed`.
pub fn cars_until_full(n: usize, seed: Seed) -> Result<u64, SimError> {
    if n == 0 {
        return Err(SimError::NoSpaces { m: 1 });
    }
    let mut rng = stream(seed, 0);
    let mut lot = CarPark::new(n);
    let mut cars = 0u64;
    while !lot.is_full() {
        lot.arrive(uniform_choice(&mut rng, n as u64) as usize);
        cars += 1;
    }
    Ok(cars)
}
