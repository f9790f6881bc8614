//! Exact and asymptotic enumeration of defective parking functions.
//!
//! `m` drivers each pick one of `n` spaces in a one-way car park; a driver
//! whose space is taken drives on to the first free space with a larger
//! number, or goes home if there is none. `cp(n, m, k)` counts the `n^m`
//! preference sequences that send exactly `k` drivers home.
//!
//! - [`exact`]: big-integer counts by recurrence and by Abel-type sums.
//! - [`sim`]: the process itself, exhaustive enumeration and seeded Monte Carlo.
//! - [`asymptotics`]: limiting distributions and the tree function.
//! - [`verify`]: cross-method invariant suites.

pub mod asymptotics;
pub mod count;
pub mod exact;
pub mod quadrature;
pub mod sim;
pub mod verify;

pub use count::{ratio_to_f64, Count, SignedCount};
pub use exact::{DefectDistribution, ParkingParams};
pub use sim::Seed;
