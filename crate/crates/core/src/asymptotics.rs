//! Limiting distributions of the defect.
//!
//! With `m = n + y√n` drivers, the probability that at least `x√n` of them
//! fail to park tends to `exp(-2x(x-y))` for `x > y` (and to 1 otherwise);
//! for `m = n` this is a Rayleigh law. With `m = λn` the car park ends up
//! full with probability tending to `1 - T(λe^{-λ})/λ` for `λ > 1`, where
//! `T` is the tree function. For fixed `k` and `m = n + ℓ`,
//! `n(S(n,m,k)/n^m - 1)` tends to [`phi`].

use std::f64::consts::{E, PI};

use thiserror::Error;

use crate::quadrature::{integrate, QuadratureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn domain(name: &'static str, value: f64, domain: &'static str) -> AsymptoticError {
    AsymptoticError::Domain {
        name,
        value,
        domain,
    }
}

fn require_finite(name: &'static str, value: f64) -> Result<f64, AsymptoticError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain(name, value, "finite reals"))
    }
}

/// `1/e`, the largest argument of the tree function.
pub fn inverse_e() -> f64 {
    (-1.0f64).exp()
}

/// Tree function `T(v) = Σ_{i≥1} i^{i-1} v^i / i!`, the root in `[0, 1]` of
/// `t·e^{-t} = v`, for `0 <= v <= 1/e`. `T(v) = -W₀(-v)` in Lambert-W terms.
///
/// Safeguarded Newton: the iterate stays inside a bracket that shrinks every
/// step, and a step that would leave it is replaced by bisection. Near
/// `v = 1/e` the derivative `(1-t)e^{-t}` vanishes, so the start point there
/// comes from the square-root expansion around the branch point.
pub fn tree_function(v: f64) -> Result<f64, AsymptoticError> {
    let v = require_finite("v", v)?;
    let top = inverse_e();
    // λe^{-λ} near λ = 1 may round a few ulps above 1/e
    if v < 0.0 || v > top * (1.0 + 8.0 * f64::EPSILON) {
        return Err(domain("v", v, "[0, 1/e]"));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if v >= top {
        return Ok(1.0);
    }

    let residual = |t: f64| t * (-t).exp() - v;
    let mut t = if v < 0.2 {
        // first terms of the series
        v + v * v + 1.5 * v.powi(3) + 8.0 / 3.0 * v.powi(4)
    } else {
        let p = (2.0 * (1.0 - E * v)).sqrt();
        1.0 - p + p * p / 3.0 - 11.0 / 72.0 * p.powi(3)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        if !(lo..=hi).contains(&t) {
            t = 0.5 * (lo + hi);
        }
        let f = residual(t);
        if f == 0.0 {
            return Ok(t);
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = (1.0 - t) * (-t).exp();
        let newton = t - f / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t || hi - lo <= 4.0 * f64::EPSILON {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// Limit of `P(defect >= x√n)` with `n + y√n` drivers: `e^{-2x(x-y)}` if `x > y`, else 1.
pub fn limiting_tail(x: f64, y: f64) -> Result<f64, AsymptoticError> {
    let x = require_finite("x", x)?;
    let y = require_finite("y", y)?;
    if x < 0.0 {
        return Err(domain("x", x, "x >= 0"));
    }
    Ok(if x > y {
        (-2.0 * x * (x - y)).exp()
    } else {
        1.0
    })
}

/// Rayleigh CDF with parameter 1/2: `1 - e^{-2x²}`.
pub fn rayleigh_cdf(x: f64) -> Result<f64, AsymptoticError> {
    let x = require_finite("x", x)?;
    if x < 0.0 {
        return Err(domain("x", x, "x >= 0"));
    }
    Ok(-(-2.0 * x * x).exp_m1())
}

/// Approximation to `cp(n, m, k) / n^m` for `m < n + k`:
/// `(2/n)(2k - m + n)·exp(-2k(k - m + n)/n)`.
pub fn pmf_approx(n: u64, m: u64, k: u64) -> Result<f64, AsymptoticError> {
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    if m >= n + k {
        return Err(domain("m", m as f64, "m < n + k"));
    }
    let (n, m, k) = (n as f64, m as f64, k as f64);
    Ok(2.0 / n * (2.0 * k - m + n) * (-2.0 * k * (k - m + n) / n).exp())
}

/// Limit of `n · p(n, n + y√n, x√n, αn)`, the scaled weight of the `i = αn`
/// term of the tail sum:
///
/// ```text
/// (x - y) / √(2π α³(1-α)) · exp(-(x - (1-α)y)² / (2α(1-α)))
/// ```
pub fn limiting_density(x: f64, y: f64, alpha: f64) -> Result<f64, AsymptoticError> {
    let x = require_finite("x", x)?;
    let y = require_finite("y", y)?;
    let alpha = require_finite("alpha", alpha)?;
    if x <= y {
        return Err(domain("x", x, "x > y"));
    }
    if alpha <= 0.0 || alpha >= 1.0 {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    let spread = alpha * (1.0 - alpha);
    let shift = x - (1.0 - alpha) * y;
    Ok((x - y) / (2.0 * PI * alpha.powi(3) * (1.0 - alpha)).sqrt()
        * (-shift * shift / (2.0 * spread)).exp())
}

const DENSITY_TOLERANCE: f64 = 1e-12;
const MAX_INTERVALS: usize = 2000;

/// `∫₀¹ limiting_density(x, y, α) dα` by adaptive quadrature; should equal
/// `e^{-2x(x-y)}`.
///
/// Integrated in `θ` with `α = sin²θ`, which absorbs the `(1-α)^{-1/2}`
/// endpoint singularity. At `α → 0` the integrand vanishes because
/// `x - y > 0`.
pub fn density_integral_check(x: f64, y: f64) -> Result<f64, AsymptoticError> {
    let x = require_finite("x", x)?;
    let y = require_finite("y", y)?;
    if x < 0.0 {
        return Err(domain("x", x, "x >= 0"));
    }
    if x <= y {
        return Err(domain("x", x, "x > y"));
    }
    let scale = 2.0 * (x - y) / (2.0 * PI).sqrt();
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let (s2, c2) = (s * s, c * c);
        if s2 == 0.0 {
            return 0.0;
        }
        let shift = x - c2 * y;
        let exponent = -shift * shift / (2.0 * s2 * c2);
        if exponent < -745.0 {
            return 0.0;
        }
        scale / s2 * exponent.exp()
    };
    Ok(integrate(integrand, 0.0, PI / 2.0, DENSITY_TOLERANCE, MAX_INTERVALS)?.value)
}

/// The same integral in the form
/// `(2π)^{-1/2} ∫₀^∞ √(x(x-y)/u³)·exp(-x(x-y)(1+u)²/(2u)) du`,
/// obtained with `α = u(x-y)/(x + u(x-y))`; needs `x > 0`.
/// Evaluated on `u = w/(1-w)`, `w ∈ (0, 1)`.
pub fn substituted_integral(x: f64, y: f64) -> Result<f64, AsymptoticError> {
    let x = require_finite("x", x)?;
    let y = require_finite("y", y)?;
    if x <= 0.0 {
        return Err(domain("x", x, "x > 0"));
    }
    if x <= y {
        return Err(domain("x", x, "x > y"));
    }
    let c = x * (x - y);
    let integrand = |w: f64| {
        let u = w / (1.0 - w);
        let exponent = -c * (1.0 + u) * (1.0 + u) / (2.0 * u);
        if !exponent.is_finite() || exponent < -745.0 {
            return 0.0;
        }
        let jacobian = 1.0 / ((1.0 - w) * (1.0 - w));
        (c / u.powi(3)).sqrt() * exponent.exp() * jacobian / (2.0 * PI).sqrt()
    };
    Ok(integrate(integrand, 0.0, 1.0, DENSITY_TOLERANCE, MAX_INTERVALS)?.value)
}

/// Limiting probability that `⌊λn⌋` drivers fill `n` spaces:
/// 0 for `λ <= 1`, else `1 - T(λe^{-λ})/λ`.
pub fn full_lot_limit(lambda: f64) -> Result<f64, AsymptoticError> {
    let lambda = require_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(domain("lambda", lambda, "lambda > 0"));
    }
    if lambda <= 1.0 {
        return Ok(0.0);
    }
    Ok(1.0 - tree_function(lambda * (-lambda).exp())? / lambda)
}

/// Partial sum `Σ_{i<terms} (λ^i/i!)(i+1)^{i-1} e^{-λ(1+i)}`, which tends to
/// `T(λe^{-λ})/λ`. Terms are formed in log space.
pub fn full_lot_series(lambda: f64, terms: usize) -> Result<f64, AsymptoticError> {
    let lambda = require_finite("lambda", lambda)?;
    if lambda <= 0.0 {
        return Err(domain("lambda", lambda, "lambda > 0"));
    }
    let ln_lambda = lambda.ln();
    let mut ln_factorial = 0.0;
    let mut sum = KahanSum::default();
    for i in 0..terms {
        if i > 0 {
            ln_factorial += (i as f64).ln();
        }
        let i_f = i as f64;
        let ln_term =
            i_f * ln_lambda - ln_factorial + (i_f - 1.0) * (i_f + 1.0).ln() - lambda * (1.0 + i_f);
        sum.add(ln_term.exp());
    }
    Ok(sum.total())
}

/// `φ(ℓ, k) = -(k-ℓ)·Σ_{i=0}^{k-1} ((-1)^i/i!)(k-i)^i e^{k-i}` for `k > ℓ`, else 0.
pub fn phi(ell: i64, k: u32) -> f64 {
    if i64::from(k) <= ell {
        return 0.0;
    }
    let mut sum = KahanSum::default();
    let mut factorial = 1.0;
    for i in 0..k {
        if i > 0 {
            factorial *= f64::from(i);
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let base = f64::from(k - i);
        sum.add(sign / factorial * base.powi(i as i32) * base.exp());
    }
    -((i64::from(k) - ell) as f64) * sum.total()
}

/// `lim cp(n, n+ℓ, k) / cp(n, n+ℓ, 0) = (φ(ℓ,k) - φ(ℓ,k+1)) / (φ(ℓ,0) - φ(ℓ,1))`, for `ℓ <= 0`.
pub fn defect_ratio_limit(ell: i64, k: u32) -> Result<f64, AsymptoticError> {
    if ell > 0 {
        return Err(domain("ell", ell as f64, "ell <= 0"));
    }
    Ok((phi(ell, k) - phi(ell, k + 1)) / (phi(ell, 0) - phi(ell, 1)))
}

/// Compensated (Kahan–Babuška) summation.
#[derive(Default, Clone, Copy, Debug)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}
